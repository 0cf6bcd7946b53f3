"""The symbol with an emerging singularity, and its Fourier coefficients.

For t > 0 the zeros of the symbol sit at e^{+-t}, off the circle, and the
plain trapezoid rule converges geometrically.  At t = 0 they merge on the
circle; the graded rule clusters nodes there instead.
"""
import numpy as np
from scipy.special import gamma

from fhlab.symbol import SymbolSpec, fourier_coeffs, symbol_eval

spec = SymbolSpec(alpha=0.3, beta=0.2j, t=0.2, v_coeffs={1: 0.1, -1: 0.1})
print(spec.dumps())

# the symbol on the circle; with beta imaginary it is e^{beta t} times a positive function
theta = np.linspace(-np.pi, np.pi, 7)
print("f(theta) e^{-beta t}:", np.round(symbol_eval(spec, theta) * np.exp(-spec.beta * spec.t), 6))

for t in (0.5, 0.05, 0.005, 0.0):
    table = fourier_coeffs(spec.with_t(t), 8)
    print(f"t={t:6.3f}  method={table.method:8s} nodes={table.quadrature_nodes:7d}  "
          f"f_0={table[0]:.12f}  f_8={abs(table[8]):.3e}")

# pure root singularity: f_0 is a ratio of Gamma functions
table = fourier_coeffs(SymbolSpec(0.3, 0.0, 0.0), 0)
print("\n(2-2cos)^0.3: f_0 =", table[0].real, " exact:", gamma(1.6) / gamma(1.3) ** 2)
