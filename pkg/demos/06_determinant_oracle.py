"""sigma read off from exact determinants, compared with the ODE solution.

Subtracting every known term from ln D_n(x/2n) leaves Omega(x) + O(1/n);
x d/dx of that is sigma(x).
"""
from fhlab.painleve import pv_solve, sigma_oracle_from_determinants
from fhlab.symbol import SymbolSpec

for a, b in [(0.3, 0.0), (0.0, -0.5)]:
    sol = pv_solve(a, b)
    print(f"\nalpha={a}, beta={b}")
    print("     x    ODE sigma        n=128 oracle     n=256 oracle")
    for x in (0.5, 1, 2, 4, 8):
        o1 = sigma_oracle_from_determinants(SymbolSpec(a, b), 128, x).real
        o2 = sigma_oracle_from_determinants(SymbolSpec(a, b), 256, x).real
        print(f"  {x:4}  {sol.sigma_at(x).real: .10f}  {o1: .10f}  {o2: .10f}")
