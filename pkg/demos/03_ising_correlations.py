"""Diagonal spin-spin correlations of the 2D Ising model as Toeplitz determinants.

alpha = 0, beta = -1/2; t > 0 is the ordered phase.  At t = 0 (critical
temperature) the correlation decays like n^{-1/4}; below it tends to
(1 - e^{-2t})^{1/4}.
"""
import math

from fhlab.asymptotics import ising_correlation, ising_product_d0
from fhlab.specialfn import fh_constant
from fhlab.symbol import fourier_coeffs, ising_spec

crit = math.exp(fh_constant(0, -0.5).real)  # sqrt(pi) G(1/2)^2
table = fourier_coeffs(ising_spec(0.0), 256)
print("critical point:   n   corr            product formula   corr*n^(1/4)/const")
for n in (4, 16, 64, 256):
    c = ising_correlation(n, 0.0, table)
    print(f"{n:18d}   {c:.12f}  {math.exp(ising_product_d0(n)):.12f}    {c * n ** 0.25 / crit:.8f}")

for t in (0.1, 0.3, 0.6):
    table = fourier_coeffs(ising_spec(t), 128)
    limit = (1 - math.exp(-2 * t)) ** 0.25
    vals = [ising_correlation(n, t, table) for n in (8, 32, 128)]
    print(f"t={t}: n=8,32,128 -> " + ", ".join(f"{v:.10f}" for v in vals) + f"   limit {limit:.10f}")

# spontaneous magnetization M = corr^{1/2} ~ (1 - e^{-2t})^{1/8}
for t in (0.05, 0.1, 0.2):
    table = fourier_coeffs(ising_spec(t), 256)
    m = ising_correlation(256, t, table) ** 0.5
    print(f"t={t}:  M = {m:.8f}   (1-e^(-2t))^(1/8) = {(1 - math.exp(-2 * t)) ** 0.125:.8f}")
