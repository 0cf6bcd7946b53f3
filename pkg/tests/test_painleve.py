import io
import math
import warnings

import mpmath
import numpy as np
import pytest
from scipy.special import gamma

from fhlab.painleve import (PolePathError, PVParams, cab_constant, large_x_boundary,
                            omega, pv_equation_check, pv_solve, sigma_form_residual,
                            sigma_oracle_from_determinants, sigma_series_small, u_trace,
                            v_asymptote_large, v_asymptote_small, write_solution_csv)
from fhlab.specialfn import PoleError, fh_constant
from fhlab.symbol import SymbolSpec

from conftest import solve_cached


def test_pv_params():
    p = PVParams.from_alpha_beta(0.3, 0.2j)
    assert p.A == pytest.approx(0.5 * (0.3 - 0.2j) ** 2)
    assert p.B == pytest.approx(-0.5 * (0.3 + 0.2j) ** 2)
    assert p.C == pytest.approx(1 + 0.4j)
    assert p.D == -0.5


def test_cab_symmetric_in_beta():
    for a, b in [(0.3, 0.2j), (0.45, 0.3), (0.1 + 0.05j, 0.2 - 0.1j)]:
        assert abs(cab_constant(a, b) - cab_constant(a, -b)) < 1e-12 * abs(cab_constant(a, b))


def test_cab_at_beta_zero():
    a = 0.3
    ref = gamma(1 + a) ** 2 * gamma(1 - 2 * a) / (gamma(1 - a) ** 2 * gamma(1 + 2 * a) ** 2 * (1 + 2 * a))
    assert cab_constant(a, 0) == pytest.approx(ref, rel=1e-13)


def test_cab_with_mpmath():
    a, b = 0.35, 0.25j
    g = mpmath.gamma
    ref = (g(1 + a + b) * g(1 + a - b) * g(1 - 2 * a)
           / (g(1 - a + b) * g(1 - a - b) * g(1 + 2 * a) ** 2 * (1 + 2 * a)))
    assert abs(cab_constant(a, b) - complex(ref)) < 1e-13


def test_v_small_trivial_prefactor():
    assert v_asymptote_small(0.2, 0.2, 0.01) == 0


def test_v_small_alpha_zero_is_the_limit():
    # the alpha = 0 formula is the continuous limit of the general one
    for b in (0.2j, -0.5, 0.3):
        mid = 0.5 * (v_asymptote_small(1e-5, b, 0.01) + v_asymptote_small(-1e-5, b, 0.01))
        assert abs(v_asymptote_small(0, b, 0.01) - mid) < 1e-7
        mid = 0.5 * (sigma_series_small(1e-5, b, 0.01) + sigma_series_small(-1e-5, b, 0.01))
        assert abs(sigma_series_small(0, b, 0.01) - mid) < 1e-9


def test_v_small_integer_two_alpha_rejected():
    for a in (0.5, 1.0):
        with pytest.raises(ValueError):
            v_asymptote_small(a, 0.1, 0.01)


def test_v_large_examples():
    # overall sign: v > 0 exactly when sigma > 0 (checked against determinants below)
    x = 12.0
    assert v_asymptote_large(0, -0.5, x) == pytest.approx(-math.exp(-x) / (2 * math.pi * x), rel=1e-13)
    assert v_asymptote_large(0.3, 0, x) == pytest.approx(x ** -0.4 * math.exp(-x) / gamma(0.3) ** 2,
                                                         rel=1e-13)


def test_v_large_pole():
    with pytest.raises(PoleError):
        v_asymptote_large(0.3, 0.3, 20)
    with pytest.raises(PoleError):
        v_asymptote_large(0.5, 1.5, 20)


def test_large_x_boundary_consistent_with_leading_terms():
    x = 40.0
    for a, b in [(0.3, 0.0), (0.0, -0.5), (0.3, 0.2j)]:
        u, v, s, tail = large_x_boundary(a, b, x)
        assert abs(u * x / (-(a + b)) - 1) < 0.1 if a + b != 0 else True
        assert abs(v / v_asymptote_large(a, b, x) - 1) < 0.1
        # sigma = -x Q with Q ~ -v/x at leading order
        assert abs(s / v - 1) < 0.1
        assert abs(tail) < abs(s)


def test_large_x_boundary_vanishing_case():
    u, v, s, tail = large_x_boundary(0.3, 0.3, 40.0)
    assert v == 0 and s == 0 and tail == 0


def test_realness(pv_point):
    a, b, sol = pv_point
    if complex(b).real == 0:
        assert np.max(np.abs(sol.v.imag)) < 1e-9
        assert np.max(np.abs(sol.sigma.imag)) < 1e-9


def test_sigma_form_residual(pv_point):
    a, b, sol = pv_point
    res = sol.sigma_form_residual
    assert np.isnan(res[0]) and np.isnan(res[-1])
    assert np.nanmax(res) < 1e-6


def test_sigma_derivative_is_minus_v(pv_point):
    a, b, sol = pv_point
    for x in (0.05, 0.5, 3.0, 20.0):
        h = 1e-4 * x
        d = (sol.sigma_at(x + h) - sol.sigma_at(x - h)) / (2 * h)
        assert abs(d + sol.v_at(x)) < 1e-7 * max(1.0, abs(sol.v_at(x)))


def test_connection_identities(pv_point):
    a, b, sol = pv_point
    rep = sol.boundary_report
    assert rep["omega_xmax_mismatch"] < 1e-3
    assert rep["integral_v_mismatch"] < 1e-3
    assert abs(omega(sol, sol.x_max) + fh_constant(a, b)) < 1e-3


def test_small_x_match(pv_point):
    a, b, sol = pv_point
    rep = sol.boundary_report
    assert rep["small_x_mismatch"] < 5 * rep["small_x_next_order"]


def test_alpha_squared_normalisation():
    sol = solve_cached(0.3, 0.0)
    x = sol.x_grid
    ints = np.trapezoid(sol.v, x) if hasattr(np, "trapezoid") else np.trapz(sol.v, x)
    series_tail = sol.x_min * v_asymptote_small(0.3, 0, sol.x_min / 2)
    assert abs(ints + series_tail - 0.09) < 1e-4


def test_large_x_ratio():
    sol = solve_cached(0.3, 0.2j)
    assert abs(sol.v_at(30) / v_asymptote_large(0.3, 0.2j, 30) - 1) < 0.1


def test_omega_small_x_limit():
    sol = solve_cached(0.3, 0.0)
    s0 = 0.09
    for x in (1e-3, 1e-4):
        assert abs(omega(sol, x) - s0 * math.log(x)) < 2 * x ** 0.6
    # continuity across x_min
    assert abs(omega(sol, sol.x_min * (1 - 1e-9)) - omega(sol, sol.x_min)) < 1e-8


def test_omega_with_equal_parameters():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sol = pv_solve(0.3, 0.3)
    # alpha = beta: v = sigma = 0 identically and Omega vanishes, as does the constant
    assert np.max(np.abs(sol.sigma)) == 0
    assert abs(omega(sol, 5.0)) < 1e-14
    assert abs(fh_constant(0.3, 0.3)) < 1e-13


def test_x_max_sensitivity():
    sol = pv_solve(0.3, 0.0, sensitivity=True)
    assert sol.boundary_report["xmax_sensitivity"] < 1e-6


def test_tolerance_monotone():
    loose = pv_solve(0.3, 0.0, tol=1e-2)
    tight = solve_cached(0.3, 0.0)
    assert loose.boundary_report["max_residual"] > 10 * tight.boundary_report["max_residual"]


def test_input_validation():
    with pytest.raises(ValueError):
        pv_solve(0.3, 0, x_min=2.0)
    with pytest.raises(ValueError):
        pv_solve(0.3, 0, x_max=100.0)
    with pytest.raises(ValueError):
        pv_solve(-0.6, 0)


def test_pole_proximity_reported():
    with pytest.raises(PolePathError) as info:
        pv_solve(0.3, 1.2)
    assert 0.01 < info.value.x < 40


@pytest.mark.parametrize("ab", [(0.3, 0.0), (0.0, -0.5)])
def test_pv_equation_for_u(ab):
    sol = solve_cached(*ab)
    x, u = u_trace(sol)
    assert pv_equation_check(x, u, *ab) < 1e-4


def test_pv_equation_negative_control():
    sol = solve_cached(0.3, 0.0)
    x, u = u_trace(sol)
    assert pv_equation_check(x, np.ones_like(u), 0.3, 0.0) > 1e-2
    assert pv_equation_check(x, u * 1.01, 0.3, 0.0) > 1e-2


def test_sigma_residual_negative_control():
    sol = solve_cached(0.3, 0.0)
    bumped = type(sol)(sol.alpha, sol.beta + 0.05, sol.x_grid, sol.v, sol.u, sol.sigma,
                       sol.sigma_form_residual, {}, sol.x_min, sol.x_max, sol.tol, sol._dense)
    assert np.nanmax(sigma_form_residual(bumped)) > 1e-5


def test_csv_export():
    sol = solve_cached(0.0, -0.5)
    buf = io.StringIO()
    write_solution_csv(sol, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,re_v,im_v,re_u,im_u,re_sigma,im_sigma,residual"
    assert len(lines) == sol.x_grid.size + 1
    first = [float(c) for c in lines[1].split(",")]
    assert first[0] == sol.x_min and first[5] == sol.sigma[0].real


@pytest.mark.parametrize("ab,x", [((0.3, 0.0), 2.0), ((0.0, -0.5), 1.0)])
def test_determinant_oracle(ab, x):
    sol = solve_cached(*ab)
    o = sigma_oracle_from_determinants(SymbolSpec(*ab), 256, x)
    assert abs(o - sol.sigma_at(x)) < 0.05


def test_oracle_trivial_symbol():
    spec = SymbolSpec(0, 0, 0, {1: 0.2, -1: 0.2})
    assert abs(sigma_oracle_from_determinants(spec, 128, 2.0)) < 1e-8


def test_oracle_warns_on_unbalanced_step():
    with pytest.warns(RuntimeWarning):
        sigma_oracle_from_determinants(SymbolSpec(0.3, 0), 128, 2.0, h_rel=0.2)


@pytest.mark.parametrize("ab", [(0.3, 0.0), (0.0, -0.5)])
def test_sign_of_v_agrees_with_determinants(ab):
    # sigma = x Omega' from exact determinants fixes the overall sign of v
    o = sigma_oracle_from_determinants(SymbolSpec(*ab), 128, 6.0).real
    assert np.sign(o) == np.sign(v_asymptote_large(*ab, 6.0).real)
    assert np.sign(o) == np.sign(solve_cached(*ab).v_at(6.0).real)
