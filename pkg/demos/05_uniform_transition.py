"""ln D_n across the transition from Fisher-Hartwig (x = 2nt -> 0) to Szego (x -> inf).

Neither fixed-t formula works uniformly; the Painleve term Omega(2nt) bridges them.
"""
import numpy as np

from fhlab.asymptotics import (fh_asymptote, phase_distance, szego_asymptote,
                               transition_asymptote)
from fhlab.painleve import pv_solve
from fhlab.symbol import SymbolSpec, fourier_coeffs
from fhlab.toeplitz import log_toeplitz_det

spec = SymbolSpec(0.3, 0.2j, 0.0, {1: 0.1, -1: 0.1})
sol = pv_solve(0.3, 0.2j)

for n in (64, 128, 256):
    print(f"\nn={n}")
    print("      x     exact            |exact-szego|  |exact-fh|   |exact-transition|")
    fh = fh_asymptote(spec, n).value
    for x in np.geomspace(0.1, 20, 6):
        sp = spec.with_t(x / (2 * n))
        ex = log_toeplitz_det(fourier_coeffs(sp, n), n).log_det
        sz = szego_asymptote(sp, n).value
        tr = transition_asymptote(sp, n, sol).value
        print(f"  {x:6.2f}  {ex.real: .10f}   {phase_distance(ex, sz):.2e}      "
              f"{phase_distance(ex, fh):.2e}     {phase_distance(ex, tr):.2e}")
