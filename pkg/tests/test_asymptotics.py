import io
import math

import numpy as np
import pytest

from fhlab.asymptotics import (TERM_NAMES, fh_asymptote, ising_correlation, ising_product_d0,
                               phase_distance, szego_asymptote, transition_asymptote,
                               write_estimates_csv)
from fhlab.specialfn import fh_constant
from fhlab.symbol import SymbolSpec, fourier_coeffs, ising_spec
from fhlab.toeplitz import log_toeplitz_det

from conftest import solve_cached


def exact(spec, n):
    return log_toeplitz_det(fourier_coeffs(spec, n), n).log_det


def test_value_is_sum_of_terms():
    spec = SymbolSpec(0.3, 0.2j, 0.01, {1: 0.1, -1: 0.1})
    sol = solve_cached(0.3, 0.2j)
    for est in (szego_asymptote(spec, 100), fh_asymptote(spec.with_t(0), 100),
                transition_asymptote(spec, 100, sol)):
        assert abs(est.value - sum(est.terms.values())) < 1e-12
        assert set(est.terms) <= set(TERM_NAMES)


def test_trivial_symbol_all_regimes_zero():
    spec = SymbolSpec(0, 0, 0.5)
    assert szego_asymptote(spec, 10).value == 0
    assert fh_asymptote(spec.with_t(0), 10).value == 0


def test_szego_ising_closed_form():
    n, t = 50, 0.4
    val = szego_asymptote(ising_spec(t), n).value
    assert val == pytest.approx(-n * t / 2 + 0.25 * math.log(1 - math.exp(-2 * t)), abs=1e-13)


def test_szego_against_exact():
    spec = SymbolSpec(0.25, 0, 0.5, {1: 0.2, -1: 0.2})
    assert phase_distance(exact(spec, 64), szego_asymptote(spec, 64).value) < 1e-3


def test_szego_rejects_t_zero():
    with pytest.raises(ValueError):
        szego_asymptote(ising_spec(0.0), 10)


def test_fh_ising_closed_form():
    n = 100
    val = fh_asymptote(ising_spec(0.0), n).value
    assert val == pytest.approx(-0.25 * math.log(n) + fh_constant(0, -0.5), abs=1e-13)


def test_fh_against_exact_and_shrinking():
    spec = SymbolSpec(0.3, 0, 0)
    gaps = [abs(exact(spec, n) - fh_asymptote(spec, n).value) for n in (64, 128, 256)]
    assert gaps[-1] < 0.02
    assert gaps[0] > gaps[1] > gaps[2]


def test_fh_rejects_positive_t():
    with pytest.raises(ValueError):
        fh_asymptote(ising_spec(0.2), 10)


def test_transition_against_exact_and_halving():
    spec = SymbolSpec(0.3, 0, 0)
    sol = solve_cached(0.3, 0.0)
    gaps = []
    for n in (128, 256):
        sp = spec.with_t(3.0 / (2 * n))
        gaps.append(phase_distance(exact(sp, n), transition_asymptote(sp, n, sol).value))
    assert gaps[0] < 0.05
    assert gaps[1] < 0.6 * gaps[0]


def test_transition_argument_checks():
    sol = solve_cached(0.3, 0.0)
    with pytest.raises(ValueError):
        transition_asymptote(SymbolSpec(0.3, 0.1, 0.01), 100, sol)
    with pytest.raises(ValueError):
        transition_asymptote(SymbolSpec(0.3, 0, 0.9), 100, sol)
    with pytest.raises(ValueError):
        transition_asymptote(SymbolSpec(0.3, 0, 0.5), 100, sol)  # x = 100 > x_max


def test_regime_consistency():
    spec = SymbolSpec(0.3, 0.2j, 0.1, {1: 0.1, -1: 0.1})
    sol = solve_cached(0.3, 0.2j)
    # t fixed, n growing: transition -> Szego
    d = [abs(transition_asymptote(spec, n, sol).value - szego_asymptote(spec, n).value)
         for n in (10, 20, 40, 80, 160)]
    # decays until it meets the solver's own Omega(inf) + fh mismatch
    floor = sol.boundary_report["omega_infinity_mismatch"]
    assert d[0] > d[1] > 10 * floor
    assert max(d[2:]) < floor + 1e-8
    # nt -> 0 at fixed n: transition -> Fisher-Hartwig
    n = 64
    fh = fh_asymptote(spec.with_t(0), n).value
    d = [abs(transition_asymptote(spec.with_t(x / (2 * n)), n, sol).value - fh)
         for x in (0.4, 0.1, 0.02)]
    assert all(a > b for a, b in zip(d, d[1:])) and d[-1] < 0.01


def test_ising_product_small_n():
    assert ising_product_d0(1) == pytest.approx(math.log(2 / math.pi), abs=1e-15)
    assert ising_product_d0(2) == pytest.approx(math.log((2 / math.pi) ** 2 * 4 / 3), abs=1e-15)
    table = fourier_coeffs(ising_spec(0.0), 6)
    assert abs(ising_product_d0(6) - log_toeplitz_det(table, 6).log_det) < 1e-8


def test_ising_correlation_values():
    t = 0.5
    table = fourier_coeffs(ising_spec(t), 1)
    assert ising_correlation(1, t, table) == pytest.approx(math.exp(t / 2) * table[0].real, rel=1e-14)
    table = fourier_coeffs(ising_spec(0.0), 64)
    assert ising_correlation(64, 0.0, table) * 64 ** 0.25 == pytest.approx(
        math.exp(fh_constant(0, -0.5).real), rel=1e-3)


def test_ising_correlation_approaches_limit():
    # below the critical temperature the correlation falls monotonically to its limit
    t = 0.3
    table = fourier_coeffs(ising_spec(t), 64)
    vals = [ising_correlation(n, t, table) for n in (2, 4, 8, 16, 32, 64)]
    limit = (1 - math.exp(-2 * t)) ** 0.25
    # by n = 64 the gap is at rounding level, so check monotonicity before that
    assert all(a > b for a, b in zip(vals[:-1], vals[1:-1]))
    assert all(v > limit for v in vals[:-1])
    assert vals[-1] == pytest.approx(limit, abs=1e-10)


def test_magnetization_law():
    for t in (0.2, 0.4):
        table = fourier_coeffs(ising_spec(t), 256)
        m = ising_correlation(256, t, table) ** 0.5
        assert m == pytest.approx((1 - math.exp(-2 * t)) ** 0.125, rel=1e-6)


def test_ising_correlation_rejects_other_tables():
    table = fourier_coeffs(SymbolSpec(0.3, 0, 0.5), 4)
    with pytest.raises(ValueError):
        ising_correlation(2, 0.5, table)
    table = fourier_coeffs(ising_spec(0.5), 4)
    with pytest.raises(ValueError):
        ising_correlation(2, 0.4, table)


def test_estimates_csv():
    ests = [szego_asymptote(ising_spec(0.3), 10), fh_asymptote(ising_spec(0.0), 10)]
    buf = io.StringIO()
    write_estimates_csv(ests, buf)
    rows = buf.getvalue().splitlines()
    assert rows[0].split(",")[:5] == ["regime", "n", "t", "re_value", "im_value"]
    assert len(rows) == 3
    assert rows[1].startswith("szego,10,")
