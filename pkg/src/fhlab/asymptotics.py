"""Closed-form large-n predictions for ln D_n in the three regimes, plus Ising helpers.

Each estimate keeps its pieces in a ``terms`` dict so tables can show where
the value comes from.  All infinite sums are summed in closed form.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .painleve import omega
from .specialfn import fh_constant
from .symbol import szego_sum
from .toeplitz import log_toeplitz_det

__all__ = [
    "AsymptoticEstimate",
    "TERM_NAMES",
    "szego_asymptote",
    "fh_asymptote",
    "transition_asymptote",
    "ising_correlation",
    "ising_product_d0",
    "write_estimates_csv",
    "phase_distance",
]

TERM_NAMES = ("linear", "sum", "barnes", "omega", "log_n")
DEFAULT_T0 = 0.7


@dataclass(frozen=True)
class AsymptoticEstimate:
    regime: str
    n: int
    t: float
    terms: dict = field(default_factory=dict)

    @property
    def value(self):
        return complex(sum(self.terms.values()))

    def csv_row(self):
        row = [self.regime, self.n, repr(float(self.t)),
               repr(self.value.real), repr(self.value.imag)]
        for name in TERM_NAMES:
            v = self.terms.get(name)
            row += ["", ""] if v is None else [repr(complex(v).real), repr(complex(v).imag)]
        return row


def write_estimates_csv(estimates, fh):
    """One row per estimate; a re/im column pair per named term (blank when absent)."""
    w = csv.writer(fh, lineterminator="\n")
    head = ["regime", "n", "t", "re_value", "im_value"]
    for name in TERM_NAMES:
        head += [f"re_{name}", f"im_{name}"]
    w.writerow(head)
    for e in estimates:
        w.writerow(e.csv_row())


def phase_distance(a, b):
    """|a - b| with the imaginary difference reduced mod 2 pi."""
    d = complex(a) - complex(b)
    im = d.imag - 2 * math.pi * round(d.imag / (2 * math.pi))
    return abs(complex(d.real, im))


def szego_asymptote(spec, n):
    """Strong Szego prediction for fixed t > 0."""
    if not spec.t > 0:
        raise ValueError("the Szego regime needs t > 0; the sum diverges at t = 0")
    a, b = spec.alpha, spec.beta
    return AsymptoticEstimate("szego", n, spec.t, {
        "linear": n * spec.v(0) + (a + b) * n * spec.t,
        "sum": szego_sum(spec, spec.t),
    })


def fh_asymptote(spec, n):
    """Fisher-Hartwig prediction at t = 0: root/jump singularity at z = 1."""
    if spec.t != 0:
        raise ValueError(f"the Fisher-Hartwig regime is t = 0 (got t={spec.t})")
    a, b = spec.alpha, spec.beta
    s = 0j
    for k in range(1, spec.v_support + 1):
        s += k * spec.v(k) * spec.v(-k) - (a - b) * spec.v(k) - (a + b) * spec.v(-k)
    return AsymptoticEstimate("fisher_hartwig", n, 0.0, {
        "linear": n * spec.v(0),
        "sum": s,
        "log_n": (a * a - b * b) * math.log(n),
        "barnes": fh_constant(a, b),
    })


def transition_asymptote(spec, n, sol, t0=DEFAULT_T0):
    """Uniform prediction for 0 < t < t0 with Omega(2nt) taken from ``sol``."""
    a, b = spec.alpha, spec.beta
    if abs(sol.alpha - a) > 1e-14 or abs(sol.beta - b) > 1e-14:
        raise ValueError(f"solution parameters ({sol.alpha}, {sol.beta}) do not match "
                         f"the symbol ({a}, {b})")
    t = spec.t
    if not 0 < t < t0:
        raise ValueError(f"need 0 < t < t0={t0} (got t={t})")
    x = 2 * n * t
    if not sol.x_min <= x <= sol.x_max:
        raise ValueError(f"x = 2nt = {x} outside the solution range [{sol.x_min}, {sol.x_max}]")
    return AsymptoticEstimate("transition", n, t, {
        "linear": n * spec.v(0) + (a + b) * n * t,
        "sum": szego_sum(spec, t),
        "barnes": fh_constant(a, b),
        "omega": omega(sol, x),
    })


def _is_ising(spec):
    return spec.alpha == 0 and spec.beta == -0.5 and spec.v_support == 0 and spec.v(0) == 0


def ising_correlation(n, t, table):
    """Diagonal spin-spin correlation e^{nt/2} D_n(t) from an Ising Fourier table."""
    if not _is_ising(table.spec):
        raise ValueError("table is not built from the Ising symbol (alpha=0, beta=-1/2, V=0)")
    if table.spec.t != t or t < 0:
        raise ValueError(f"table was built at t={table.spec.t}, requested t={t}")
    ld = log_toeplitz_det(table, n).log_det
    return float(np.exp(ld + n * t / 2).real)


def ising_product_d0(n):
    """ln D_n(0) for the Ising symbol from its explicit finite product.

    D_n(0) = (2/pi)^n prod_{k<n} (1 - 1/(4k^2))^{k-n}; the prefactor is fixed
    by D_1 = f_0 = 2/pi.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(1, n, dtype=float)
    return n * math.log(2.0 / math.pi) + float(np.sum((k - n) * np.log1p(-0.25 / (k * k))))
