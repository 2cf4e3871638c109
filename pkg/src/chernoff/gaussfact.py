"""Chernoff-type factorisation of the standard normal density.

The normal density factors as ``phi(z) = g(z) g(-z) / 2`` with

    g(z) = (2/pi)**(1/4) exp(pi^2/12 + z - int_0^{e^z} log(1+t)/t dt)
         = (2/pi)**(1/4) exp(z) exp(int_0^inf log((e^s + 1)/(e^s + e^z)) ds).

The first line is the primary evaluator; the second, rewritten with
``u = exp(-s)`` as ``int_0^1 (log1p(u) - log1p(u e^z)) / u du``, is an
independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._quadrature import adaptive_quad
from .errors import DomainError

__all__ = [
    "Z_MAX",
    "GaussFactorValue",
    "dilog_integral",
    "g_normal",
    "g_normal_first_form",
    "g_normal_value",
    "factorization_residual_scan",
    "log_concavity_scan",
    "integrability_report",
    "pf2_scan",
    "neg_log_g",
]

Z_MAX = 40.0
REFLECT_ABOVE = 20.0
_SERIES_BELOW = 1e-3
_PREF = (2.0 / math.pi) ** 0.25
_TOL = 1e-14


def _log1p_over_t(t):
    t = np.asarray(t, dtype=float)
    small = np.abs(t) < _SERIES_BELOW
    ts = np.where(small, t, 0.0)
    # 1 - t/2 + t^2/3 - ... ; six terms reach 1e-19 at t = 1e-3
    series = 1.0 + ts * (-1 / 2 + ts * (1 / 3 + ts * (-1 / 4 + ts * (1 / 5 + ts * (-1 / 6)))))
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log1p(t) / t
    return np.where(small, series, direct)


@lru_cache(maxsize=1)
def _dilog_at_one():
    """int_0^1 log(1+t)/t dt by quadrature (equals pi^2/12)."""
    return adaptive_quad(_log1p_over_t, 0.0, 1.0, _TOL, _TOL)


def dilog_integral(z):
    """I(z) = int_0^{e^z} log(1+t)/t dt for |z| <= Z_MAX.

    Upper limits above 1 are mapped to ``int_0^z log1p(e^s) ds`` so the
    quadrature never sees a large argument; above ``e^20`` the reflection
    ``I = pi^2/6 + z^2/2 - int_0^{e^-z} log(1+t)/t dt`` is used.
    """
    z = float(z)
    if not abs(z) <= Z_MAX:
        raise DomainError(f"|z| must be <= {Z_MAX}, got {z}")
    if z > REFLECT_ABOVE:
        return math.pi ** 2 / 6.0 + 0.5 * z * z - adaptive_quad(
            _log1p_over_t, 0.0, math.exp(-z), _TOL, _TOL)
    if z <= 0.0:
        return adaptive_quad(_log1p_over_t, 0.0, math.exp(z), _TOL, _TOL)
    return _dilog_at_one() + adaptive_quad(
        lambda s: np.logaddexp(0.0, s), 0.0, z, _TOL, _TOL)


def g_normal(z):
    """The factor g with phi(z) = g(z) g(-z) / 2, from the dilogarithm form.

    >>> round(g_normal(0.0), 12) == round((2 / math.pi) ** 0.25, 12)
    True
    """
    if np.ndim(z):
        return np.array([g_normal(x) for x in np.ravel(z)]).reshape(np.shape(z))
    z = float(z)
    return _PREF * math.exp(math.pi ** 2 / 12.0 + z - dilog_integral(z))


def g_normal_first_form(z):
    """Same factor from the infinite s-integral, compactified by u = e^-s."""
    z = float(z)
    if not abs(z) <= Z_MAX:
        raise DomainError(f"|z| must be <= {Z_MAX}, got {z}")
    ez = math.exp(z)

    def f(u):
        u = np.asarray(u, dtype=float)
        # (log1p(u) - log1p(u e^z)) / u, with its limit 1 - e^z at u = 0
        return _log1p_over_t(u) - ez * _log1p_over_t(u * ez)

    return _PREF * math.exp(z + adaptive_quad(f, 0.0, 1.0, _TOL, _TOL))


@dataclass(frozen=True)
class GaussFactorValue:
    """g at z together with the factorisation residual g(z)g(-z)/2 - phi(z)."""

    z: float
    g: float
    residual: float


def _phi(z):
    return math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)


def g_normal_value(z):
    z = float(z)
    gz = g_normal(z)
    return GaussFactorValue(z=z, g=gz, residual=0.5 * gz * g_normal(-z) - _phi(z))


def factorization_residual_scan(grid):
    """max over the grid of |g(z) g(-z) / 2 - phi(z)|."""
    grid = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any(np.abs(grid) > 6.0 + 1e-12):
        raise DomainError("residual scan is defined on [-6, 6]")
    return max(abs(g_normal_value(z).residual) for z in grid)


def log_concavity_scan(grid):
    """Second divided differences of -log g on an evenly spaced grid.

    Analytically ``(-log g)'' = e^z / (1 + e^z) > 0``; the scan returns the
    finite-difference values so callers can check the sign.
    """
    grid = np.asarray(grid, dtype=float)
    h = grid[1] - grid[0]
    if grid.size < 3 or not np.allclose(np.diff(grid), h):
        raise ValueError("grid must be evenly spaced with at least three points")
    nl = neg_log_g(grid)
    return (nl[2:] - 2.0 * nl[1:-1] + nl[:-2]) / (h * h)


def integrability_report(lo=-30.0, hi=10.0):
    """int_lo^hi g(z) dz together with the mass beyond each end.

    Both tail bounds are rigorous: ``g(z) <= (2/pi)^(1/4) e^(pi^2/12 + z)``
    because the integral term is nonnegative, and ``(-log g)' = log(1 + e^z) - 1
    > z - 1`` gives ``int_hi^inf g <= g(hi) / (hi - 1)`` for hi > 1.
    """
    value = adaptive_quad(g_normal, lo, hi, 1e-12, 1e-12)
    left_tail = _PREF * math.exp(math.pi ** 2 / 12.0 + lo)
    right_tail = g_normal(hi) / (hi - 1.0) if hi > 1.0 else math.inf
    return {"lo": lo, "hi": hi, "integral": value,
            "left_tail_bound": left_tail, "right_tail_bound": right_tail,
            "finite": bool(math.isfinite(value))}


def pf2_scan(draws=2000, spread=4.0, seed=0):
    """Smallest 2x2 determinant det[g(x_i - y_j)] over random ordered pairs.

    Data only: log-concavity of g makes these nonnegative, and the scan says
    nothing about total positivity of higher order.
    """
    rng = np.random.default_rng(seed)
    x = np.sort(rng.uniform(-spread, spread, (draws, 2)), axis=1)
    y = np.sort(rng.uniform(-spread, spread, (draws, 2)), axis=1)
    d = np.stack([x[:, 0] - y[:, 0], x[:, 0] - y[:, 1], x[:, 1] - y[:, 0], x[:, 1] - y[:, 1]])
    lg = -neg_log_g(d)
    det = np.exp(lg[0] + lg[3]) - np.exp(lg[1] + lg[2])
    return float(np.min(det))


def neg_log_g(z):
    """-log g elementwise, without forming g (no underflow for large z)."""
    z = np.asarray(z, dtype=float)
    out = np.array([dilog_integral(x) - x - math.pi ** 2 / 12.0 for x in z.ravel()])
    return (out - math.log(_PREF)).reshape(z.shape)
