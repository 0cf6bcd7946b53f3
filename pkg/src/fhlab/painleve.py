"""Painleve V objects: v(x), u(x), sigma(x) and Omega(x).

The (u, v) system is integrated backward from a large x_max, where the
boundary data are known in closed form in terms of confluent hypergeometric
functions, down to a small x_min, where the known small-x expansion of sigma
serves as an independent target.  sigma is carried along as an extra state
(sigma' = -v), as is the integral that defines Omega.
"""

import csv
import math
import warnings
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import special
from scipy.integrate import solve_ivp

from .specialfn import EULER_GAMMA, PoleError, fh_constant, log_gamma
from .symbol import fourier_coeffs, szego_sum
from .toeplitz import log_toeplitz_det

__all__ = [
    "PVParams",
    "PainleveSolution",
    "PolePathError",
    "ToleranceError",
    "cab_constant",
    "v_asymptote_small",
    "sigma_series_small",
    "v_asymptote_large",
    "large_x_boundary",
    "pv_solve",
    "omega",
    "sigma_form_residual",
    "pv_equation_check",
    "u_trace",
    "geometric_grid",
    "sigma_oracle_from_determinants",
    "write_solution_csv",
]

POLE_THRESHOLD = 1e8
CSV_COLUMNS = ["x", "re_v", "im_v", "re_u", "im_u", "re_sigma", "im_sigma", "residual"]


class PolePathError(ArithmeticError):
    """|u| or |v| blew up during integration (a pole of the transcendent is near)."""

    def __init__(self, msg, x=None):
        super().__init__(msg)
        self.x = x


class ToleranceError(ArithmeticError):
    """The integrator could not meet the requested tolerance."""


@dataclass(frozen=True)
class PVParams:
    A: complex
    B: complex
    C: complex
    D: complex

    @classmethod
    def from_alpha_beta(cls, alpha, beta):
        a, b = complex(alpha), complex(beta)
        return cls(0.5 * (a - b) ** 2, -0.5 * (a + b) ** 2, 1 + 2 * b, complex(-0.5))


def _integer_2alpha(alpha):
    a2 = 2 * complex(alpha)
    return a2.imag == 0 and a2.real == round(a2.real)


def _rgamma(z):
    return complex(special.rgamma(complex(z)))


def cab_constant(alpha, beta):
    """C(alpha, beta) of the small-x expansion, assembled from log-Gamma.

    Gamma(1 - alpha +/- beta) in the denominator may sit on a pole; the
    reciprocal then vanishes and so does C.
    """
    a, b = complex(alpha), complex(beta)
    if _integer_2alpha(a) and a.real >= 0.5:
        raise ValueError(f"C(alpha, beta) needs 2 alpha not a positive integer (alpha={a})")
    recip = _rgamma(1 - a + b) * _rgamma(1 - a - b)
    if recip == 0:
        return 0j
    log_num = log_gamma(1 + a + b) + log_gamma(1 + a - b) + log_gamma(1 - 2 * a)
    log_den = 2 * log_gamma(1 + 2 * a)
    return complex(np.exp(log_num - log_den)) * recip / (1 + 2 * a)


def _log_c_slope(beta):
    # d/d alpha ln C(alpha, beta) at alpha = 0
    b = complex(beta)
    psi = special.psi
    return 2 * psi(1 + b) + 2 * psi(1 - b) + 6 * EULER_GAMMA - 2


def _check_small_x_series(alpha):
    if _integer_2alpha(alpha) and complex(alpha) != 0:
        raise ValueError(f"the small-x series has no explicit form for integer 2 alpha "
                         f"other than 0 (alpha={alpha})")


def v_asymptote_small(alpha, beta, x):
    """Leading small-x behaviour of v.

    For 2 alpha not an integer this is k {1 - (2 alpha + 1) x^{2 alpha} C},
    k = (alpha^2 - beta^2)/(2 alpha).  At alpha = 0 the two terms merge into
    beta^2 (1 + ln x + L/2), with L = d/d alpha ln C at alpha = 0.  Other
    integer values of 2 alpha raise ValueError.
    """
    a, b, x = complex(alpha), complex(beta), float(x)
    _check_small_x_series(a)
    if a == 0:
        return b * b * (1 + math.log(x) + 0.5 * _log_c_slope(b))
    k = (a * a - b * b) / (2 * a)
    return k * (1 - (2 * a + 1) * x ** (2 * a) * cab_constant(a, b))


def sigma_series_small(alpha, beta, x, with_error=False):
    """Small-x series of sigma: its value and, optionally, the size of the next term.

    sigma = alpha^2 - beta^2 - k (x - x^{1 + 2 alpha} C) + ..., where the
    omitted terms are O(x) relative to the bracket; ``with_error`` returns
    ``(value, |bracket| * x)``.
    """
    a, b, x = complex(alpha), complex(beta), float(x)
    _check_small_x_series(a)
    s0 = a * a - b * b
    if a == 0:
        bracket = b * b * x * (math.log(x) + 0.5 * _log_c_slope(b))
        val = s0 - bracket
    else:
        k = s0 / (2 * a)
        bracket = k * (x - x ** (1 + 2 * a) * cab_constant(a, b))
        val = s0 - bracket
    if with_error:
        return val, abs(bracket) * x
    return val


def _omega_small(alpha, beta, x):
    # int_0^x (sigma_series - s0)/xi dxi
    a, b = complex(alpha), complex(beta)
    if a == 0:
        return -b * b * (x * math.log(x) - x + 0.5 * x * _log_c_slope(b))
    k = (a * a - b * b) / (2 * a)
    return -k * (x - x ** (1 + 2 * a) * cab_constant(a, b) / (1 + 2 * a))


def v_asymptote_large(alpha, beta, x):
    """Leading large-x behaviour x^{2 alpha - 1} e^{-x} / (Gamma(alpha-beta) Gamma(alpha+beta)).

    Raises PoleError when alpha + beta or alpha - beta is 0, -1, -2, ...;
    the leading term then vanishes and a higher one would be needed.
    """
    a, b, x = complex(alpha), complex(beta), float(x)
    r = _rgamma(a - b) * _rgamma(a + b)
    if r == 0:
        raise PoleError(f"Gamma(alpha +/- beta) has a pole (alpha={a}, beta={b}); "
                        "the leading large-x term of v vanishes")
    return x ** (2 * a - 1) * math.exp(-x) * r


def large_x_boundary(alpha, beta, x, dps=20):
    """Boundary data (u, v, sigma, omega_tail) at a large x.

    Built from the explicit large-x solution written with Tricomi's U:
    u = 1 + x T / ((2 beta + 1 - x) T + x T'), T = U(1-a+b, 2+2b, x), and
    with P = -e^{-x} U(1-a-b, 2-2b, x) U(1-a+b, 2+2b, x) / (Gamma(a+b) Gamma(a-b)),
    Q(x) = int_x^inf P,  v = Q - x P,  sigma = -x Q.
    ``omega_tail`` is int_x^inf sigma / xi dxi.  The neglected corrections are
    of relative size e^{-x/2} or smaller.
    """
    with mpmath.workdps(dps):
        a, b, x = mpmath.mpc(alpha), mpmath.mpc(beta), mpmath.mpf(x)
        a1, b1 = 1 - a + b, 2 + 2 * b
        tt = mpmath.hyperu(a1, b1, x)
        dt = -a1 * mpmath.hyperu(a1 + 1, b1 + 1, x)
        u = 1 + x * tt / ((2 * b + 1 - x) * tt + x * dt)
        r = mpmath.rgamma(a + b) * mpmath.rgamma(a - b)
        if r == 0:
            return complex(u), 0j, 0j, 0j

        def p(s):
            return -mpmath.exp(-s) * mpmath.hyperu(1 - a - b, 2 - 2 * b, s) * \
                mpmath.hyperu(a1, b1, s) * r

        q = mpmath.quad(p, [x, x + 10, mpmath.inf])
        qq = mpmath.quad(lambda s: (s - x) * p(s), [x, x + 10, mpmath.inf])
        px = p(x)
        return complex(u), complex(q - x * px), complex(-x * q), complex(-qq)


def _rhs(x, y, a, b, s0):
    u, v, s, _ = y
    um1 = u - 1
    du = (x * u - 2 * v * um1 * um1 + um1 * ((a - b) * u - b - a)) / x
    # v = 0 is invariant; at alpha = beta = 0 it comes with u = 0
    vu = v / u if v != 0 else 0.0
    dv = (u * v * (v - a + b) - vu * (v - b - a)) / x
    return [du, dv, -v, -(s - s0) / x]


@dataclass(frozen=True, eq=False)
class PainleveSolution:
    alpha: complex
    beta: complex
    x_grid: np.ndarray
    v: np.ndarray
    u: np.ndarray
    sigma: np.ndarray
    sigma_form_residual: np.ndarray
    boundary_report: dict
    x_min: float
    x_max: float
    tol: float
    _dense: object = field(repr=False, default=None)
    _omega_base: complex = field(repr=False, default=0j)
    _omega_tail: complex = field(repr=False, default=0j)

    def state(self, x):
        """(u, v, sigma, J) from the dense interpolant; x in [x_min, x_max]."""
        x = float(x)
        if not self.x_min * (1 - 1e-12) <= x <= self.x_max * (1 + 1e-12):
            raise ValueError(f"x={x} outside the solved range [{self.x_min}, {self.x_max}]")
        return self._dense(min(max(x, self.x_min), self.x_max))

    def sigma_at(self, x):
        return complex(self.state(x)[2])

    def v_at(self, x):
        return complex(self.state(x)[1])

    def u_at(self, x):
        return complex(self.state(x)[0])

    def rows(self):
        for i, x in enumerate(self.x_grid):
            yield [x, self.v[i].real, self.v[i].imag, self.u[i].real, self.u[i].imag,
                   self.sigma[i].real, self.sigma[i].imag, self.sigma_form_residual[i]]

    def to_csv(self, fh):
        write_solution_csv(self, fh)


def write_solution_csv(sol, fh, extra=None):
    """Write ``x,re_v,im_v,re_u,im_u,re_sigma,im_sigma,residual`` rows.

    ``extra`` is an optional mapping column -> per-node values appended on the right.
    """
    extra = extra or {}
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS + list(extra))
    for i, row in enumerate(sol.rows()):
        row = row + [col[i] for col in extra.values()]
        w.writerow([repr(float(c)) for c in row])


def _integrate(a, b, x_min, x_max, tol, grid):
    s0 = a * a - b * b
    u0, v0, sig0, tail = large_x_boundary(a, b, x_max)
    y0 = np.array([u0, v0, sig0, 0j])

    def blowup(x, y, *_):
        ratio = 0.0 if y[1] == 0 else (abs(y[1] / y[0]) if y[0] != 0 else np.inf)
        return POLE_THRESHOLD - max(abs(y[0]), abs(y[1]), ratio)
    blowup.terminal = True

    # v is exponentially small at x_max: a pure relative tolerance on it is needed
    atol = np.array([tol * 1e-4, 1e-300, 1e-300, tol * 1e-4])
    sol = solve_ivp(_rhs, (x_max, x_min), y0, method="DOP853", rtol=tol, atol=atol,
                    args=(a, b, s0), dense_output=True, events=blowup, t_eval=grid[::-1])
    if sol.status == 1:
        xe = float(sol.t_events[0][0])
        raise PolePathError(f"pole proximity near x={xe:.6g} (|u| or |v| > {POLE_THRESHOLD:g}) "
                            f"for alpha={a}, beta={b}", xe)
    if sol.status != 0:
        raise ToleranceError(f"integration failed for alpha={a}, beta={b}, tol={tol}: "
                             f"{sol.message}")
    return sol, tail


def geometric_grid(x_min, x_max, nodes_per_decade=40):
    n = int(math.ceil(nodes_per_decade * math.log10(x_max / x_min))) + 1
    g = np.geomspace(x_min, x_max, n)
    g[0], g[-1] = x_min, x_max
    return g


def pv_solve(alpha, beta, x_min=0.01, x_max=40.0, tol=1e-12, nodes_per_decade=40,
             sensitivity=False):
    """Integrate the (u, v) system backward from x_max and package the result.

    Returns a PainleveSolution whose ``boundary_report`` holds:
      small_x_mismatch       |sigma(x_min) - series(x_min)|
      small_x_next_order     size of the first omitted series term at x_min
      large_x_ratio_error    |v(x_probe)/v_asymptote_large(x_probe) - 1|, x_probe = min(30, x_max)
      omega_xmax_mismatch    |Omega(x_max) + fh_constant|
      omega_infinity_mismatch  same with the exponentially small tail beyond x_max added
      integral_v_mismatch    |int_0^inf v - (alpha^2 - beta^2)|
      tail_bound             |sigma(x_max)|, the part of sigma carried by (x_max, inf)
      max_residual           largest sigma-form residual over interior nodes
      xmax_sensitivity       (optional) max |d sigma| on the common grid when x_max -> x_max - 10
    """
    a, b = complex(alpha), complex(beta)
    x_min, x_max = float(x_min), float(x_max)
    if not 0 < x_min < 1 < x_max <= 80:
        raise ValueError(f"need 0 < x_min < 1 < x_max <= 80 (got {x_min}, {x_max})")
    if not a.real > -0.5:
        raise ValueError(f"need Re alpha > -1/2 (alpha={a})")
    if not tol > 0:
        raise ValueError("tol must be positive")
    # real alpha with imaginary beta is pole-free; real beta keeps the ODE real
    real_case = a.imag == 0 and (b.real == 0 or b.imag == 0)
    if not real_case:
        warnings.warn("complex parameters outside the real case: best effort only",
                      RuntimeWarning, stacklevel=2)
    grid = geometric_grid(x_min, x_max, nodes_per_decade)
    sol, tail = _integrate(a, b, x_min, x_max, tol, grid)
    ys = sol.y[:, ::-1]
    u, v, sig, jint = ys
    s0 = a * a - b * b

    series_ok = not (_integer_2alpha(a) and a != 0)
    if series_ok:
        small = _omega_small(a, b, x_min)
    else:
        # linear extrapolation of sigma - s0 to 0 when no series is available
        small = sig[0] - s0
    omega_base = small + jint[0]

    partial = PainleveSolution(a, b, grid, v, u, sig, np.full(grid.size, np.nan), {},
                               x_min, x_max, tol, sol.sol, omega_base, tail)
    resid = sigma_form_residual(partial)
    fh = fh_constant(a, b)
    om_max = omega(partial, x_max)
    report = {
        "small_x_series": series_ok,
        "pole_free_guarantee": a.imag == 0 and b.real == 0,
        "tail_bound": abs(sig[-1]),
        "max_residual": float(np.nanmax(resid)),
        "omega_xmax_mismatch": abs(om_max + fh),
        "omega_infinity_mismatch": abs(om_max + tail + fh),
    }
    if series_ok:
        ser, nxt = sigma_series_small(a, b, x_min, with_error=True)
        report["small_x_mismatch"] = abs(sig[0] - ser)
        report["small_x_next_order"] = nxt
        # int_0^inf v = sigma(x_min) + int_0^x_min v_series
        report["integral_v_mismatch"] = abs(sig[0] + (s0 - ser) - s0)
    probe = min(30.0, x_max)
    try:
        vl = v_asymptote_large(a, b, probe)
        report["large_x_ratio_error"] = abs(partial.v_at(probe) / vl - 1)
    except PoleError:
        report["large_x_ratio_error"] = None
    if sensitivity:
        other = x_max - 10.0
        if other <= 1:
            raise ValueError("sensitivity check needs x_max > 11")
        sol2, _ = _integrate(a, b, x_min, other, tol, grid[grid <= other])
        report["xmax_sensitivity"] = float(np.max(np.abs(sol2.y[2][::-1] - sig[grid <= other])))
    report = {k: float(v) if isinstance(v, (float, np.floating)) else v for k, v in report.items()}
    return PainleveSolution(a, b, grid, v, u, sig, resid, report, x_min, x_max, tol,
                            sol.sol, omega_base, tail)


def omega(sol, x):
    """Omega(x) = int_0^x (sigma - alpha^2 + beta^2)/xi dxi + (alpha^2 - beta^2) ln x.

    Inside [x_min, x_max] the integral uses the integrated state; on (0, x_min)
    the small-x series of sigma; above x_max the exponentially small tail.
    """
    a, b = sol.alpha, sol.beta
    s0 = a * a - b * b
    x = float(x)
    if x <= 0:
        raise ValueError("Omega needs x > 0")
    if x == math.inf:
        return omega(sol, sol.x_max) + sol._omega_tail
    if x < sol.x_min:
        return _omega_small(a, b, x) + s0 * math.log(x)
    if x > sol.x_max:
        # sigma is negligible there; only the log term keeps growing
        return omega(sol, sol.x_max) + sol._omega_tail
    jint = sol.state(x)[3]
    return complex(sol._omega_base - jint + s0 * math.log(x))


def _sigma_residual_terms(x, s, ds, d2s, alpha, beta):
    a, b = alpha, beta
    lhs = (x * d2s) ** 2
    rhs = (s - x * ds + 2 * ds * ds + 2 * a * ds) ** 2 - 4 * ds * ds * (ds + a + b) * (ds + a - b)
    return lhs - rhs


def sigma_form_residual(sol, h=0.01):
    """|sigma-form residual| at each node, sigma' and sigma'' by 5-point FD of the interpolant.

    The stencil is x (1 + j h), j = -2..2; nodes whose stencil leaves
    [x_min, x_max] get NaN.
    """
    out = np.full(sol.x_grid.size, np.nan)
    for i, x in enumerate(sol.x_grid):
        d = h * x
        if x - 2 * d < sol.x_min or x + 2 * d > sol.x_max:
            continue
        f = [complex(sol._dense(x + j * d)[2]) for j in (-2, -1, 0, 1, 2)]
        ds = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * d)
        d2s = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * d * d)
        out[i] = abs(_sigma_residual_terms(x, f[2], ds, d2s, sol.alpha, sol.beta))
    return out


def _fornberg(z, x, m):
    # weights for derivatives 0..m at z from nodes x (Fornberg 1988)
    n = len(x)
    c = np.zeros((n, m + 1))
    c1, c4 = 1.0, x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2, c5, c4 = 1.0, c4, x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


def u_trace(sol, nodes_per_decade=200):
    """(x, u) resampled from the solution's interpolant on a finer geometric grid."""
    x = geometric_grid(sol.x_min, sol.x_max, nodes_per_decade)
    return x, np.array([sol.u_at(xi) for xi in x])


def pv_equation_check(x, u, alpha, beta):
    """Max residual of the fifth Painleve equation for a sampled u.

    u' and u'' come from 5-point finite-difference weights on the (possibly
    non-uniform) grid; the two nodes at each end are skipped.  Returns inf if
    the equation cannot be evaluated (u = 0 or u = 1 somewhere).
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=complex)
    if x.size < 5:
        raise ValueError("need at least 5 nodes")
    p = PVParams.from_alpha_beta(alpha, beta)
    worst = 0.0
    with np.errstate(all="ignore"):
        for i in range(2, x.size - 2):
            w = _fornberg(x[i], x[i - 2:i + 3], 2)
            seg = u[i - 2:i + 3]
            du, d2u = w[:, 1] @ seg, w[:, 2] @ seg
            ui, xi = u[i], x[i]
            rhs = ((1 / (2 * ui) + 1 / (ui - 1)) * du * du - du / xi
                   + (ui - 1) ** 2 / xi ** 2 * (p.A * ui + p.B / ui)
                   + p.C * ui / xi + p.D * ui * (ui + 1) / (ui - 1))
            r = abs(d2u - rhs)
            if not np.isfinite(r):
                return math.inf
            worst = max(worst, r)
    return worst


def _omega_num(spec, n, x):
    t = x / (2 * n)
    table = fourier_coeffs(spec.with_t(t), n)
    ld = log_toeplitz_det(table, n).log_det
    a, b = spec.alpha, spec.beta
    bracket = n * spec.v(0) + (a + b) * x / 2 + szego_sum(spec, t) + fh_constant(a, b)
    return ld - bracket


def sigma_oracle_from_determinants(spec, n, x, h_rel=1e-3):
    """sigma(x) estimated as x d/dx of ln D_n(x/2n) minus its non-Omega terms.

    A central difference in x with relative step h_rel; the estimate carries
    O(1/n) from the finite-n asymptotics and O(h_rel^2) from the difference.
    The symbol's t is ignored; it is set to x/(2n).
    """
    n = int(n)
    if h_rel ** 2 > 1.0 / n or 1e-12 / h_rel > 1.0 / n:
        warnings.warn(f"h_rel={h_rel} unbalanced against the O(1/n) error at n={n}",
                      RuntimeWarning, stacklevel=2)
    hi = _omega_num(spec, n, x * (1 + h_rel))
    lo = _omega_num(spec, n, x * (1 - h_rel))
    # the phases may differ by whole turns
    d = hi - lo
    d = complex(d.real, d.imag - 2 * math.pi * round(d.imag / (2 * math.pi)))
    return d / (2 * h_rel)
