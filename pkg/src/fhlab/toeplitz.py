"""Finite-n Toeplitz determinants, orthogonal polynomials on the circle and Y.

The determinant is obtained from a dense LU factorisation of the n x n
matrix (f_{j-k}).  The orthogonal polynomials phi_n, phi_hat_n are obtained
by solving the moment systems that their determinant formulas encode, and
the Riemann-Hilbert matrix Y(z) uses Cauchy transforms computed on the same
quadrature grid as the Fourier table.
"""

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .specialfn import TWO_PI
from .symbol import fourier_coeffs

__all__ = [
    "DeterminantRecord",
    "OrthoPolyPair",
    "SingularDeterminantError",
    "log_toeplitz_det",
    "log_det_sequence",
    "ortho_poly",
    "orthogonality_residuals",
    "y_matrix",
    "y_matrix_derivative",
    "verify_differential_identity",
    "write_determinants_csv",
]

PIVOT_FLOOR = 1e-300


class SingularDeterminantError(ArithmeticError):
    """D_n is numerically zero (some LU pivot below 1e-300)."""


@dataclass(frozen=True)
class DeterminantRecord:
    n: int
    t: float
    log_det: complex
    pivot_min: float
    branch_note: int = 0

    def csv_row(self):
        return [self.n, repr(self.t), repr(self.log_det.real), repr(self.log_det.imag),
                repr(self.pivot_min)]


def _wrap_phase(phi):
    return phi - TWO_PI * math.floor((phi + math.pi) / TWO_PI)


def log_toeplitz_det(table, n):
    """ln D_n for the table's symbol.

    The modulus is sum(ln|p_k|) over the LU pivots.  The phase is the
    unwrapped sum of pivot arguments (plus pi per row swap); the reported
    ``log_det`` carries it reduced to (-pi, pi], and ``branch_note`` counts the
    2 pi windings removed by that reduction.  ``n = 0`` gives ln D_0 = 0.
    """
    n = int(n)
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return DeterminantRecord(0, table.spec.t, 0j, math.inf, 0)
    mat = table.toeplitz(n).copy()
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularDeterminantError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(mat, overwrite_a=True, check_finite=False)
    pivots = np.diag(lu)
    mags = np.abs(pivots)
    pmin = float(mags.min())
    if pmin < PIVOT_FLOOR:
        raise SingularDeterminantError(
            f"D_{n} is numerically zero at t={table.spec.t} (min pivot {pmin:.3e})")
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    modulus = float(np.sum(np.log(mags)))
    phase = float(np.sum(np.angle(pivots))) + math.pi * (swaps % 2)
    wrapped = _wrap_phase(phase)
    winding = int(round((phase - wrapped) / TWO_PI))
    return DeterminantRecord(n, table.spec.t, complex(modulus, wrapped), pmin, winding)


def log_det_sequence(table, n_values):
    return [log_toeplitz_det(table, n) for n in n_values]


@dataclass(frozen=True)
class OrthoPolyPair:
    """phi_n and phi_hat_n as coefficient vectors in increasing degree."""

    n: int
    phi: np.ndarray
    phi_hat: np.ndarray
    chi: complex
    condition: float = float("nan")

    def eval_phi(self, z):
        return np.polynomial.polynomial.polyval(z, self.phi)

    def eval_phi_hat(self, z):
        return np.polynomial.polynomial.polyval(z, self.phi_hat)


def ortho_poly(table, dets, n, cond_warn=1e12):
    """Orthonormal polynomials phi_n, phi_hat_n for the table's weight.

    ``dets`` maps degree -> DeterminantRecord and may be None or partial;
    missing D_n, D_{n+1} are computed.  The coefficient vectors solve

        sum_k c_k f_{j-k}     = delta_{jn} / chi_n   (phi_n)
        sum_k d_k f_{k-j}     = delta_{jn} / chi_n   (phi_hat_n)

    for j = 0..n, with chi_n = sqrt(D_n / D_{n+1}) taken from the log
    determinants so that both polynomials share it.
    """
    n = int(n)
    dets = dict(dets or {})
    for m in (n, n + 1):
        if m not in dets:
            dets[m] = log_toeplitz_det(table, m)
    chi = complex(np.exp(0.5 * (dets[n].log_det - dets[n + 1].log_det)))
    mat = table.toeplitz(n + 1)
    rhs = np.zeros(n + 1, dtype=complex)
    rhs[n] = 1.0 / chi
    cond = float(np.linalg.cond(mat)) if n + 1 <= 1024 else float("nan")
    if cond > cond_warn:
        warnings.warn(f"moment system for n={n} is ill-conditioned (cond={cond:.2e})",
                      RuntimeWarning, stacklevel=2)
    phi = scipy.linalg.solve(mat, rhs)
    phi_hat = scipy.linalg.solve(mat.T, rhs)
    return OrthoPolyPair(n, phi, phi_hat, chi, cond)


def orthogonality_residuals(pair, table):
    """|(1/2pi) int phi_n z^-j f dtheta - delta_jn/chi_n| for j = 0..n, both families."""
    js = np.arange(pair.n + 1)
    xi = np.exp(1j * table.theta)
    wf = table.weights * table.values
    zpow = xi[None, :] ** (-js[:, None])
    r1 = zpow @ (wf * pair.eval_phi(xi))
    r2 = (1.0 / zpow) @ (wf * pair.eval_phi_hat(1.0 / xi))
    target = np.zeros(pair.n + 1, dtype=complex)
    target[-1] = 1.0 / pair.chi
    return np.abs(r1 - target), np.abs(r2 - target)


def _check_off_circle(z, table):
    gap = abs(abs(z) - 1.0)
    if gap < 10.0 / table.quadrature_nodes:
        raise ValueError(f"|z| = {abs(z)} is too close to the unit circle for the "
                         f"{table.quadrature_nodes}-node Cauchy quadrature")


def _y_parts(pair, prev, table, z):
    n = pair.n
    xi = np.exp(1j * table.theta)
    wf = table.weights * table.values
    # phi_n / chi_n is monic; z^{n-1} phi_hat_{n-1}(1/z) reversed coefficients
    p11 = pair.phi / pair.chi
    p21 = -prev.chi * prev.phi_hat[::-1]
    g12 = wf * np.polynomial.polynomial.polyval(xi, pair.phi) * xi ** (1 - n) / pair.chi
    g22 = -prev.chi * wf * prev.eval_phi_hat(1.0 / xi)
    return p11, p21, g12, g22, xi


FAR_RADIUS = 2.0


def _cauchy(g, xi, z, first_moment, order):
    """Cauchy sum ``sum_l g_l / (xi_l - z)`` (order 0) or its z-derivative (order 1).

    Outside |z| > FAR_RADIUS the kernel is expanded in powers of 1/z and the
    moments below ``first_moment`` (zero by orthogonality) are dropped; the
    direct sum would otherwise lose all digits to cancellation.
    """
    if abs(z) <= FAR_RADIUS:
        return np.sum(g / (xi - z) ** (order + 1))
    kmax = first_moment + int(math.ceil(40.0 / math.log(abs(z)))) + 1
    ks = np.arange(first_moment, kmax)
    moments = (xi[None, :] ** ks[:, None]) @ g
    # 1/(xi - z) = -sum_k xi^k z^{-k-1};  d/dz gives +sum_k (k+1) xi^k z^{-k-2}
    if order == 0:
        return -np.sum(moments * z ** (-ks - 1.0))
    return np.sum((ks + 1) * moments * z ** (-ks - 2.0))


def _y_eval(pair, table, z, prev, order):
    if pair.n < 1:
        raise ValueError("Y needs n >= 1")
    z = complex(z)
    _check_off_circle(z, table)
    if prev is None:
        prev = ortho_poly(table, None, pair.n - 1)
    p11, p21, g12, g22, xi = _y_parts(pair, prev, table, z)
    pv = np.polynomial.polynomial.polyval
    if order:
        p11 = np.polynomial.polynomial.polyder(p11)
        p21 = np.polynomial.polynomial.polyder(p21)
    n = pair.n
    return np.array([[pv(z, p11), _cauchy(g12, xi, z, n, order)],
                     [pv(z, p21), _cauchy(g22, xi, z, n - 1, order)]])


def y_matrix(pair, table, z, prev=None):
    """The 2x2 matrix Y(z) for degree n = pair.n >= 1, z off the unit circle.

    ``prev`` is the degree n-1 pair (computed if omitted).  Raises ValueError
    when ``||z| - 1| < 10 / nodes``.
    """
    return _y_eval(pair, table, z, prev, 0)


def y_matrix_derivative(pair, table, z, prev=None):
    """dY/dz, differentiating the polynomials and the Cauchy kernels exactly."""
    return _y_eval(pair, table, z, prev, 1)


def _log_det_at(spec, n, t):
    table = fourier_coeffs(spec.with_t(t), n, method="uniform")
    return log_toeplitz_det(table, n).log_det


def _continue(values):
    # Remove 2 pi jumps in imaginary parts of nearby log determinants.
    base = values[0].imag
    out = []
    for v in values:
        k = round((v.imag - base) / TWO_PI)
        out.append(complex(v.real, v.imag - TWO_PI * k))
    return out


def verify_differential_identity(spec, n, t, h=1e-3, return_parts=False):
    """|d/dt ln D_n - RHS| where RHS is built from Y at z = e^t and e^-t.

    The t-derivative is a central difference with one Richardson step
    (O(h^4)); the z-derivative of Y is exact.
    """
    if not t > h > 0:
        raise ValueError("need t > h > 0")
    if n > 16:
        raise ValueError("n <= 16 keeps the dense quadrature affordable")
    a, b = spec.alpha, spec.beta
    lp, lm, lp2, lm2 = _continue([_log_det_at(spec, n, t + h), _log_det_at(spec, n, t - h),
                                  _log_det_at(spec, n, t + h / 2), _log_det_at(spec, n, t - h / 2)])
    d_h = (lp - lm) / (2 * h)
    d_h2 = (lp2 - lm2) / h
    lhs = (4 * d_h2 - d_h) / 3

    table = fourier_coeffs(spec.with_t(t), n + 1, method="uniform")
    dets = {m: log_toeplitz_det(table, m) for m in (n - 1, n, n + 1)}
    pair = ortho_poly(table, dets, n)
    prev = ortho_poly(table, dets, n - 1)

    def ydy22(z):
        y = y_matrix(pair, table, z, prev)
        dy = y_matrix_derivative(pair, table, z, prev)
        return np.linalg.solve(y, dy)[1, 1]

    rhs = 0j
    if a + b != 0:
        rhs += -(a + b) * math.exp(t) * ydy22(math.exp(t))
    if a - b != 0:
        rhs += (a - b) * math.exp(-t) * ydy22(math.exp(-t))
    disc = abs(lhs - rhs)
    if return_parts:
        return disc, lhs, rhs
    return disc


def write_determinants_csv(records, fh):
    """Rows ``n,t,re_logdet,im_logdet,pivot_min``."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "t", "re_logdet", "im_logdet", "pivot_min"])
    for r in records:
        w.writerow(r.csv_row())
