"""Log-Gamma, Barnes G and the constant term of the Fisher-Hartwig expansion."""
import numpy as np
import mpmath

from fhlab.specialfn import fh_constant, log_barnes_g, log_barnes_g_series, log_gamma

# Barnes G satisfies G(z+1) = Gamma(z) G(z); check it at a few complex points
for z in [0.5, 2.5 + 1j, -1.3 + 0.4j, 7 - 3j]:
    lhs = log_barnes_g(z + 1) - log_barnes_g(z)
    print(f"z={z!s:>12}  lnG(z+1)-lnG(z)-lnGamma(z) = {abs(lhs - log_gamma(z)):.1e}")

# two independent routes: large-argument expansion + ladder, and the Taylor series
z = 0.3 + 0.5j
print("asymptotic route:", log_barnes_g(z))
print("series route:    ", log_barnes_g_series(z))
print("mpmath:          ", complex(mpmath.log(mpmath.barnesg(z))))

# the constant for the critical Ising point: ln(sqrt(pi) G(1/2)^2)
print("\nfh_constant(0, -1/2) =", fh_constant(0, -0.5).real)
print("check:                ", np.log(np.sqrt(np.pi) * float(mpmath.barnesg(0.5)) ** 2))

# a small table of the constant over real alpha and imaginary beta
print("\n alpha   beta    fh_constant")
for a in (0.0, 0.25, 0.5):
    for b in (0.0, 0.2j, 0.4j):
        print(f"{a:5.2f}  {b.imag:5.2f}i  {fh_constant(a, b).real: .10f}")
