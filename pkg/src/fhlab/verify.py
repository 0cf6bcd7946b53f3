"""Self-checks run by ``fhlab verify``: identities that must hold to tolerance."""

import math

import numpy as np

from .asymptotics import ising_product_d0
from .painleve import pv_solve
from .specialfn import log_barnes_g, log_gamma
from .symbol import SymbolSpec, fourier_coeffs, ising_spec
from .toeplitz import (log_toeplitz_det, ortho_poly, orthogonality_residuals,
                       verify_differential_identity, y_matrix)

__all__ = ["run_checks", "gamma_recurrence_error", "barnes_recurrence_error"]


def _mod2pi(z):
    z = complex(z)
    return complex(z.real, z.imag - 2 * math.pi * round(z.imag / (2 * math.pi)))


def random_points(n, seed=0):
    """Complex sample points in a box around the origin, away from the poles."""
    rng = np.random.default_rng(seed)
    z = rng.uniform(-6, 8, n) + 1j * rng.uniform(-6, 6, n)
    near = np.abs(z.imag) < 0.05
    z[near] += 0.1j
    return z


def gamma_recurrence_error(zs):
    """max |ln Gamma(z+1) - ln Gamma(z) - ln z| mod 2 pi i."""
    return max(abs(_mod2pi(log_gamma(z + 1) - log_gamma(z) - np.log(z))) for z in zs)


def barnes_recurrence_error(zs):
    """max |ln G(z+1) - ln G(z) - ln Gamma(z)| mod 2 pi i."""
    return max(abs(_mod2pi(log_barnes_g(z + 1) - log_barnes_g(z) - log_gamma(z))) for z in zs)


def _check(name, value, threshold):
    value = float(value)
    return {"check": name, "value": value, "threshold": threshold,
            "passed": bool(value < threshold)}


def run_checks(quick=False):
    out = []
    zs = random_points(200 if quick else 1000)
    out.append(_check("gamma_recurrence", gamma_recurrence_error(zs), 1e-10))
    out.append(_check("barnes_recurrence", barnes_recurrence_error(zs), 1e-10))

    # Ising at t = 0: f_0 = 2/pi and the explicit product formula
    table = fourier_coeffs(ising_spec(0.0), 16)
    out.append(_check("ising_f0", abs(table[0] - 2 / math.pi), 1e-12))
    worst = max(abs(log_toeplitz_det(table, n).log_det.real - ising_product_d0(n))
                for n in range(1, 17))
    out.append(_check("ising_product", worst, 1e-8))

    # orthogonality and det Y = 1 for a complex-parameter symbol
    spec = SymbolSpec(0.25, 0.1j, 0.3, {1: 0.1, -1: 0.1})
    table = fourier_coeffs(spec, 9)
    pair, prev = ortho_poly(table, None, 8), ortho_poly(table, None, 7)
    r1, r2 = orthogonality_residuals(pair, table)
    out.append(_check("orthogonality", max(r1.max(), r2.max()), 1e-10))
    dets = [abs(np.linalg.det(y_matrix(pair, table, z, prev)) - 1) for z in (0.5, 1.5j, -3.0)]
    out.append(_check("det_Y", max(dets), 1e-9))

    ns = (4, 8) if quick else (4, 8, 12)
    for sp in (ising_spec(0.0), SymbolSpec(0.25, 0.1j)):
        worst = max(verify_differential_identity(sp, n, t) for n in ns for t in (0.3, 0.6))
        name = "differential_identity_" + ("ising" if sp.beta == -0.5 else "complex")
        out.append(_check(name, worst, 1e-6))

    params = [(0.3, 0.0), (0.0, -0.5)] if quick else \
        [(0.3, 0.0), (0.3, 0.2j), (0.0, -0.5), (0.75, 0.4j)]
    for a, b in params:
        sol = pv_solve(a, b)
        rep = sol.boundary_report
        tag = f"({a}, {b})"
        out.append(_check(f"sigma_form_residual {tag}", rep["max_residual"], 1e-6))
        out.append(_check(f"omega_connection {tag}", rep["omega_xmax_mismatch"], 1e-3))
        out.append(_check(f"integral_v {tag}", rep["integral_v_mismatch"], 1e-3))
        out.append(_check(f"small_x_match {tag}",
                          rep["small_x_mismatch"] / (5 * rep["small_x_next_order"]), 1.0))
        if complex(b).real == 0:
            im = max(np.abs(sol.sigma.imag).max(), np.abs(sol.v.imag).max())
            out.append(_check(f"realness {tag}", im, 1e-9))
    return out
