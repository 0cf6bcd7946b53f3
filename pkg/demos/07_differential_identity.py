"""d/dt ln D_n against the expression built from the Riemann-Hilbert matrix Y."""
from fhlab.symbol import SymbolSpec, ising_spec
from fhlab.toeplitz import verify_differential_identity

for name, spec in [("ising", ising_spec()), ("alpha=0.25, beta=0.1i", SymbolSpec(0.25, 0.1j))]:
    for n in (4, 8, 12):
        for t in (0.3, 0.6):
            disc, lhs, rhs = verify_differential_identity(spec, n, t, return_parts=True)
            print(f"{name:22s} n={n:2d} t={t}: d/dt lnD = {lhs.real: .10f}  rhs = {rhs.real: .10f}"
                  f"  |diff| = {disc:.1e}")
