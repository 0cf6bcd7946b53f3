import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fhlab.specialfn import (BarnesZeroError, DegenerateFisherHartwigError, PoleError,
                             branched_log, branched_power, fh_constant, log_barnes_g,
                             log_barnes_g_series, log_gamma)
from fhlab.verify import barnes_recurrence_error, gamma_recurrence_error, random_points


def mod2pi(z):
    return complex(z.real, z.imag - 2 * math.pi * round(z.imag / (2 * math.pi)))


def test_log_gamma_matches_mpmath():
    for z in random_points(200, seed=1):
        assert abs(log_gamma(z) - complex(mpmath.loggamma(z))) < 1e-12


def test_log_gamma_pole():
    for z in (0, -1, -7):
        with pytest.raises(PoleError):
            log_gamma(z)


def test_gamma_recurrence_random_sample():
    assert gamma_recurrence_error(random_points(1000, seed=2)) < 1e-10


def test_barnes_recurrence_random_sample():
    assert barnes_recurrence_error(random_points(1000, seed=3)) < 1e-10


def test_barnes_matches_mpmath():
    rng = np.random.default_rng(4)
    zs = rng.uniform(-4, 6, 100) + 1j * rng.uniform(-5, 5, 100)
    for z in zs:
        ref = complex(mpmath.log(mpmath.barnesg(z)))
        assert abs(mod2pi(log_barnes_g(z) - ref)) < 1e-11


def test_barnes_known_values():
    assert log_barnes_g(1) == pytest.approx(0, abs=1e-14)
    assert log_barnes_g(2) == pytest.approx(0, abs=1e-14)
    # G(4) = Gamma(1) Gamma(2) Gamma(3) = 2
    assert log_barnes_g(4) == pytest.approx(math.log(2), abs=1e-13)
    assert abs(log_barnes_g(0.5) - complex(mpmath.log(mpmath.barnesg(0.5)))) < 1e-13


def test_barnes_zero():
    for z in (0, -1, -3):
        with pytest.raises(BarnesZeroError):
            log_barnes_g(z)


def test_two_barnes_routes_agree():
    rng = np.random.default_rng(5)
    zs = rng.uniform(-3, 5, 60) + 1j * rng.uniform(-0.75, 0.75, 60)
    for z in zs:
        assert abs(mod2pi(log_barnes_g(z) - log_barnes_g_series(z))) < 1e-12


def test_series_route_rejects_large_imaginary_part():
    with pytest.raises(ValueError):
        log_barnes_g_series(1 + 2j)


@settings(max_examples=200, deadline=None)
@given(st.floats(-5, 7), st.floats(0.05, 6))
def test_conjugation_symmetry(x, y):
    z = complex(x, y)
    assert abs(log_gamma(z.conjugate()) - log_gamma(z).conjugate()) < 1e-12
    assert abs(log_barnes_g(z.conjugate()) - log_barnes_g(z).conjugate()) < 1e-11


@settings(max_examples=200, deadline=None)
@given(st.floats(-5, 7), st.floats(-6, 6))
def test_barnes_recurrence_property(x, y):
    z = complex(x, y)
    if abs(y) < 1e-3 and abs(x - round(x)) < 1e-3 and round(x) <= 0:
        return
    d = log_barnes_g(z + 1) - log_barnes_g(z) - log_gamma(z)
    assert abs(mod2pi(d)) < 1e-10


def test_branched_log_range():
    w = np.exp(1j * np.linspace(-7, 7, 1001)) * 2.5
    lw = branched_log(w)
    assert np.all(lw.imag >= 0) and np.all(lw.imag < 2 * math.pi)
    assert np.allclose(np.exp(lw), w)
    assert branched_log(-1.0).imag == pytest.approx(math.pi)
    assert branched_log(1.0) == 0
    assert branched_log(-1j).imag == pytest.approx(1.5 * math.pi)


def test_branched_power():
    assert branched_power(-1.0, 0.5) == pytest.approx(1j)
    assert branched_power(-1j, 0.5) == pytest.approx(cmath.exp(0.75j * math.pi))


def test_fh_constant_values():
    assert fh_constant(0, 0) == pytest.approx(0, abs=1e-14)
    ising = math.log(math.sqrt(math.pi) * float(mpmath.barnesg(0.5)) ** 2)
    assert fh_constant(0, -0.5) == pytest.approx(ising, abs=1e-13)
    assert fh_constant(0, -0.5).real == pytest.approx(-0.4385011660547, abs=1e-12)
    a, b = 0.3, 0.2j
    ref = mpmath.log(mpmath.barnesg(1 + a + b) * mpmath.barnesg(1 + a - b) / mpmath.barnesg(1 + 2 * a))
    assert abs(fh_constant(a, b) - complex(ref)) < 1e-12


def test_fh_constant_degenerate():
    with pytest.raises(DegenerateFisherHartwigError):
        fh_constant(0, -1)
    with pytest.raises(DegenerateFisherHartwigError):
        fh_constant(0.5, 1.5)
