"""Complex log-Gamma, Barnes G and branch-controlled logarithms.

Everything here returns principal (continuous) branches unless the name says
otherwise.  The ``branched_*`` helpers implement the convention used for the
symbol factors: the argument of the base is taken in ``[0, 2*pi)``.
"""

import math
import cmath

import numpy as np
from scipy import special

__all__ = [
    "PoleError",
    "BarnesZeroError",
    "DegenerateFisherHartwigError",
    "branched_log",
    "branched_power",
    "log_gamma",
    "log_barnes_g",
    "log_barnes_g_series",
    "fh_constant",
]

TWO_PI = 2.0 * math.pi
EULER_GAMMA = 0.57721566490153286061
# zeta'(-1) = 1/12 - ln(Glaisher's constant)
ZETA_PRIME_M1 = -0.16542114370045092921

_ASYMPTOTIC_RADIUS = 14.0
_ASYMPTOTIC_TERMS = 12
_BERNOULLI = special.bernoulli(2 * _ASYMPTOTIC_TERMS + 2)


class PoleError(ValueError):
    """Argument sits on a pole of Gamma."""


class BarnesZeroError(ValueError):
    """Argument sits on a zero of Barnes G, so its logarithm is undefined."""


class DegenerateFisherHartwigError(ValueError):
    """alpha + beta or alpha - beta is a negative integer."""


def _nonpositive_integer(z, eps=0.0):
    z = complex(z)
    if abs(z.imag) > eps:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= eps


def _negative_integer(z, eps=1e-14):
    z = complex(z)
    if abs(z.imag) > eps:
        return False
    r = round(z.real)
    return r <= -1 and abs(z.real - r) <= eps


def branched_log(w):
    """Logarithm with imaginary part in ``[0, 2*pi)``. Works on arrays."""
    w = np.asarray(w, dtype=complex)
    ang = np.mod(np.angle(w), TWO_PI)
    # angle(-1 - 0j) is -pi and mod gives exactly pi; guard the 2*pi wraparound
    ang = np.where(ang >= TWO_PI, 0.0, ang)
    out = np.log(np.abs(w)) + 1j * ang
    return out if out.ndim else complex(out)


def branched_power(w, exponent):
    """``w**exponent`` evaluated as ``exp(exponent * branched_log(w))``."""
    return np.exp(exponent * branched_log(w))


def log_gamma(z):
    """Principal log-Gamma, analytic off the negative real axis.

    Thin wrapper over :func:`scipy.special.loggamma` that turns poles into an
    exception instead of returning ``inf``/``nan``.
    """
    z = complex(z)
    if _nonpositive_integer(z):
        raise PoleError(f"log_gamma has a pole at z={z}")
    return complex(special.loggamma(z))


def _log_barnes_g_asymptotic(w):
    # ln G(1 + s) for large |s| (|arg s| < pi)
    s = complex(w) - 1.0
    log_s = cmath.log(s)
    s2 = s * s
    out = (0.5 * s2 * log_s - 0.75 * s2 + 0.5 * s * math.log(TWO_PI)
           - log_s / 12.0 + ZETA_PRIME_M1)
    inv = 1.0 / s2
    p = inv
    for k in range(1, _ASYMPTOTIC_TERMS + 1):
        out += _BERNOULLI[2 * k + 2] / (4.0 * k * (k + 1)) * p
        p *= inv
    return out


def log_barnes_g(z):
    """Logarithm of Barnes' G function, normalised by G(1) = 1.

    The argument is raised by an integer ``N`` until the large-argument
    expansion is accurate, then brought back with
    ``ln G(z) = ln G(z + N) - sum_k ln Gamma(z + k)``.  The branch is the one
    that this ladder produces: continuous in ``z`` away from the negative real
    axis and real for real ``z > 0``.

    Raises
    ------
    BarnesZeroError
        If ``z`` is ``0, -1, -2, ...``.
    """
    z = complex(z)
    if _nonpositive_integer(z):
        raise BarnesZeroError(f"G vanishes at z={z}")
    if z.imag == 0 and z.real == round(z.real) and z.real < 200:
        # G(m) = prod_{k<m} Gamma(k), exact at the small integers
        return complex(np.sum(special.gammaln(np.arange(1, int(z.real)))))
    shift = 0
    if abs(z) < _ASYMPTOTIC_RADIUS or z.real < 1.0:
        # need both |w| large and Re w comfortably positive
        need_re = max(0.0, 2.0 - z.real)
        need_abs = math.sqrt(max(0.0, _ASYMPTOTIC_RADIUS ** 2 - z.imag ** 2)) - z.real
        shift = int(math.ceil(max(need_re, need_abs, 0.0)))
    w = z + shift
    out = _log_barnes_g_asymptotic(w)
    if shift:
        ks = z + np.arange(shift)
        out -= complex(np.sum(special.loggamma(ks)))
    return out


def log_barnes_g_series(z, terms=None):
    """ln G(z) from the Taylor series of ln G(1 + s) about s = 0.

    The series converges for ``|s| < 1``; arguments with ``|Im z| <= 0.75`` are
    first moved into the strip ``|Re s| <= 1/2`` by the functional equation.  This
    is an independent route used to cross-check :func:`log_barnes_g`.
    """
    z = complex(z)
    if _nonpositive_integer(z):
        raise BarnesZeroError(f"G vanishes at z={z}")
    if abs(z.imag) > 0.75:
        raise ValueError("series route needs |Im z| <= 0.75")
    # ln G(z) = ln G(z0) + correction, z0 = z + m with Re(z0 - 1) in [-1/2, 1/2)
    m = int(math.floor(1.5 - z.real))
    z0 = z + m
    s = z0 - 1.0
    if terms is None:
        r = max(abs(s), 1e-3)
        terms = int(min(1000, 10 + 40.0 / max(1e-12, -math.log(r))))
    out = 0.5 * s * math.log(TWO_PI) - 0.5 * (s + (1.0 + EULER_GAMMA) * s * s)
    ks = np.arange(2, terms + 2)
    zetas = special.zeta(ks.astype(float), 1.0)
    out += complex(np.sum((-1.0) ** ks * zetas * s ** (ks + 1) / (ks + 1)))
    if m > 0:
        # z0 = z + m: ln G(z) = ln G(z0) - sum_{k<m} ln Gamma(z + k)
        out -= complex(np.sum(special.loggamma(z + np.arange(m))))
    elif m < 0:
        # z = z0 + |m|: ln G(z) = ln G(z0) + sum_{k<|m|} ln Gamma(z0 + k)
        out += complex(np.sum(special.loggamma(z0 + np.arange(-m))))
    return out


def fh_constant(alpha, beta):
    """ln[G(1+alpha+beta) G(1+alpha-beta) / G(1+2 alpha)].

    This is the constant term of the Fisher-Hartwig expansion; it vanishes at
    alpha = beta = 0 and equals ln(sqrt(pi) G(1/2)^2) for the critical Ising
    point alpha = 0, beta = -1/2.
    """
    alpha = complex(alpha)
    beta = complex(beta)
    if _negative_integer(alpha + beta) or _negative_integer(alpha - beta):
        raise DegenerateFisherHartwigError(
            f"alpha +/- beta is a negative integer (alpha={alpha}, beta={beta})")
    return (log_barnes_g(1 + alpha + beta) + log_barnes_g(1 + alpha - beta)
            - log_barnes_g(1 + 2 * alpha))
