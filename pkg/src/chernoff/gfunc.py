"""The one-sided factor g_c of Chernoff's density, by Fourier inversion.

g_c has Fourier transform ``2**(1/3) c**(-1/3) / Ai(i (2c^2)**(-1/3) lam)``.
Folding the inverse transform onto the half line gives

    g_c(x) = ((2/c)**(1/3) / pi) * int_0^U Re( exp(-i u x) / Ai(i s u) ) du,

with ``s = (2c^2)**(-1/3)``.  Derivatives come from multiplying the
integrand by ``(-i u)**k``.  The integral is taken with composite
Gauss-Kronrod panels whose width shrinks like ``1 / (1 + |x|)``; the values
of ``1/Ai`` on each panel grid are computed once and cached.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from scipy.interpolate import CubicHermiteSpline

from . import airy
from ._quadrature import gauss_legendre_panels, panel_rule
from .errors import DomainError, PrecisionError

__all__ = [
    "QuadratureConfig",
    "GParams",
    "tail_bound",
    "g",
    "g_deriv",
    "g_derivs",
    "v",
    "g_integral",
    "g_transform",
    "g_scaling_residual",
    "gtilde_cdf",
]

MAX_ORDER = 4
_ORDER_TOL_GROWTH = 10.0
_CHUNK = 256


@dataclass(frozen=True)
class QuadratureConfig:
    """Truncation and accuracy settings for the frequency integral.

    Attributes
    ----------
    u_max : float or None
        Upper limit of the u-integral.  None picks ``40 c**(2/3)``, which
        keeps the Airy argument range [0, 40 * 2**(-1/3)] for every c.
    nodes : int
        Node budget per abscissa; refinement beyond it is a precision failure.
    abs_tol : float
        Absolute error target for g itself.  Derivative k is held to
        ``abs_tol * 10**k``.
    panel_width : float
        Panel width used at x = 0; scaled by ``1 / (1 + |x|)``.
    """

    u_max: float | None = None
    nodes: int = 40000
    abs_tol: float = 1e-12
    panel_width: float = 1.0

    def __post_init__(self):
        if (self.u_max is not None and not self.u_max > 0) or not self.abs_tol > 0 \
                or self.nodes < 15:
            raise ValueError(f"invalid quadrature configuration {self}")


@dataclass(frozen=True)
class GParams:
    """Drift coefficient c of ``W(t) - c t**2`` plus quadrature settings."""

    c: float = 1.0
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError(f"c must be positive and finite, got {self.c}")
        bound = tail_bound(self.c, self.u_max)
        if bound > self.quad.abs_tol:
            raise ValueError(
                f"u_max={self.u_max} leaves a tail of {bound:.2e} "
                f"> abs_tol={self.quad.abs_tol}")

    @property
    def u_max(self):
        if self.quad.u_max is None:
            return 40.0 * self.c ** (2.0 / 3.0)
        return self.quad.u_max

    @property
    def scale(self):
        """s = (2 c^2)^(-1/3), the factor inside Ai."""
        return (2.0 * self.c ** 2) ** (-1.0 / 3.0)

    @property
    def prefactor(self):
        """(2/c)^(1/3) / pi in front of the folded integral."""
        return (2.0 / self.c) ** (1.0 / 3.0) / math.pi


def tail_bound(c, u, order=0):
    """Estimate of ``K * int_u^inf t**order / |Ai(i s t)| dt``.

    Uses ``1/|Ai(iy)| ~ 2 sqrt(pi) y**(1/4) exp(-(sqrt 2 / 3) y**1.5)`` and
    the Laplace-type tail estimate ``int_Y^inf y^p e^{-a y^1.5} dy
    ~ Y^(p - 1/2) e^{-a Y^1.5} / (1.5 a)``.
    """
    s = (2.0 * c ** 2) ** (-1.0 / 3.0)
    pref = (2.0 / c) ** (1.0 / 3.0) / math.pi
    y = s * u
    if y <= 0:
        return math.inf
    a = math.sqrt(2.0) / 3.0
    p = 0.25 + order
    tail_y = 2.0 * math.sqrt(math.pi) * y ** (p - 0.5) * math.exp(-a * y ** 1.5) / (1.5 * a)
    return pref * tail_y / s ** (order + 1)


def _effective_limit(params):
    """Smallest U <= u_max whose 4th-order tail is negligible vs abs_tol."""
    target = 1e-4 * params.quad.abs_tol
    lo, hi = 1.0, params.u_max
    if tail_bound(params.c, hi, MAX_ORDER) > target:
        return hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if tail_bound(params.c, mid, MAX_ORDER) > target:
            lo = mid
        else:
            hi = mid
    return hi


class _Panels:
    """Nodes, weights and (-iu)^k / Ai(isu) on one panel grid."""

    def __init__(self, params, width):
        upper = _effective_limit(params)
        u, wk, wg = panel_rule(0.0, upper, width)
        inv_ai = 1.0 / airy.ai(1j * params.scale * u)
        coef = np.empty((MAX_ORDER + 1, u.size), dtype=complex)
        coef[0] = inv_ai
        for k in range(1, MAX_ORDER + 1):
            coef[k] = coef[k - 1] * (-1j * u)
        self.u = u
        self.n_panels = u.size // 15
        self.kron = coef * wk
        self.diff = coef * (wk - wg)


class _Kernel:
    """Per-GParams evaluator; panel grids are built lazily and cached."""

    def __init__(self, params):
        self.params = params
        self._grids = {}
        self._lock = threading.Lock()

    def grid(self, level):
        grid = self._grids.get(level)
        if grid is None:
            with self._lock:
                grid = self._grids.get(level)
                if grid is None:
                    width = self.params.quad.panel_width / 2.0 ** level
                    grid = _Panels(self.params, width)
                    self._grids[level] = grid
        return grid

    def _eval_level(self, x, orders, level):
        grid = self.grid(level)
        out = np.empty((len(orders), x.size))
        err = np.empty((len(orders), x.size))
        pref = self.params.prefactor
        for start in range(0, x.size, _CHUNK):
            xs = x[start:start + _CHUNK]
            phase = np.outer(xs, grid.u)
            cos, sin = np.cos(phase), np.sin(phase)
            for i, k in enumerate(orders):
                kr = grid.kron[k]
                out[i, start:start + xs.size] = cos @ kr.real + sin @ kr.imag
                d = grid.diff[k]
                per_node = cos * d.real + sin * d.imag
                per_panel = per_node.reshape(xs.size, grid.n_panels, 15).sum(axis=2)
                err[i, start:start + xs.size] = np.abs(per_panel).sum(axis=1)
        return pref * out, pref * err

    def evaluate(self, x, orders):
        """Derivatives of the listed orders at x; adaptive in panel width."""
        quad = self.params.quad
        tol = np.array([quad.abs_tol * _ORDER_TOL_GROWTH ** k for k in orders])
        out = np.empty((len(orders), x.size))
        level = np.ceil(np.log2(1.0 + np.abs(x))).astype(int)
        pending = np.arange(x.size)
        while pending.size:
            lv = level[pending]
            next_pending = []
            for this in np.unique(lv):
                idx = pending[lv == this]
                grid = self.grid(this)
                if grid.u.size > quad.nodes:
                    raise PrecisionError(
                        f"g_c quadrature needs more than {quad.nodes} nodes "
                        f"at x={x[idx[0]]:.6g}")
                val, err = self._eval_level(x[idx], orders, this)
                out[:, idx] = val
                bad = np.any(err > tol[:, None], axis=0)
                if bad.any():
                    level[idx[bad]] += 1
                    next_pending.append(idx[bad])
            pending = np.concatenate(next_pending) if next_pending else np.empty(0, int)
        return out


@lru_cache(maxsize=32)
def _kernel(params):
    return _Kernel(params)


def _as_params(params):
    if isinstance(params, GParams):
        return params
    return GParams(c=float(params))


def _finish(values, x_in):
    return values if np.ndim(x_in) else float(values[0])


def g_derivs(params, x, orders=(0, 1, 2)):
    """Several derivatives of g_c at once; returns an array (len(orders), n).

    Sharing the trigonometric table across orders makes this much cheaper
    than separate :func:`g_deriv` calls.
    """
    params = _as_params(params)
    orders = tuple(int(k) for k in orders)
    if any(k < 0 or k > MAX_ORDER for k in orders):
        raise ValueError(f"derivative order must lie in 0..{MAX_ORDER}")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(xa)):
        raise ValueError("x must be finite")
    out = _kernel(params).evaluate(xa.ravel(), orders)
    if 0 in orders:
        i = orders.index(0)
        row = out[i]
        tol = params.quad.abs_tol
        if np.any(row < -tol):
            raise PrecisionError(
                f"g_c came out negative ({row.min():.3e}); quadrature is unreliable")
        out[i] = np.maximum(row, 0.0)
    return out.reshape((len(orders),) + xa.shape)


def g(params, x):
    """g_c(x) for scalar or array x; `params` is a GParams or a bare c."""
    return _finish(g_derivs(params, x, (0,))[0], x)


def g_deriv(params, x, order):
    """The `order`-th derivative of g_c at x, order in 0..4."""
    return _finish(g_derivs(params, x, (order,))[0], x)


def v(params, x, floor=1e-10):
    """(-log g_c)''(x) = ((g')**2 - g g'') / g**2.

    Raises
    ------
    DomainError
        Where g_c(x) <= `floor`; the ratio is pure round-off there.
    """
    d0, d1, d2 = g_derivs(params, x, (0, 1, 2))
    if np.any(d0 <= floor):
        raise DomainError(f"g_c underflows below {floor:g}; v is not resolvable")
    return _finish((d1 * d1 - d0 * d2) / (d0 * d0), x)


def g_integral(params):
    """int g_c = ghat_c(0) = 2**(1/3) c**(-1/3) / Ai(0), in closed form."""
    c = _as_params(params).c
    return 2.0 ** (1.0 / 3.0) * c ** (-1.0 / 3.0) / airy.airy_constants().ai0


def g_transform(params, lam):
    """Closed-form Fourier transform 2^(1/3) c^(-1/3) / Ai(i (2c^2)^(-1/3) lam)."""
    p = _as_params(params)
    lam = np.asarray(lam, dtype=float)
    return 2.0 ** (1.0 / 3.0) * p.c ** (-1.0 / 3.0) / airy.ai(1j * p.scale * lam)


def g_scaling_residual(c, x, quad=None):
    """g_c(x) - 2^(1/6) c^(1/3) g_{2^-1/2}((2c^2)^(1/3) x), both by quadrature."""
    quad = quad or QuadratureConfig()
    left = g(GParams(c, quad), x)
    base = GParams(2.0 ** -0.5, quad)
    right = 2.0 ** (1.0 / 6.0) * c ** (1.0 / 3.0) * g(base, (2.0 * c * c) ** (1.0 / 3.0) * np.asarray(x))
    return left - right


@lru_cache(maxsize=8)
def _gtilde_spline(params, panel):
    # left tail ~ exp(kappa x) with kappa = (2c^2)^(1/3) a_1; right tail is super-exponential
    kappa = airy.airy_zero(1) / params.scale
    lo, hi = -40.0 / kappa, 8.0 * params.scale
    edges = np.linspace(lo, hi, int(math.ceil((hi - lo) / panel)) + 1)
    nodes, weights = gauss_legendre_panels(edges)
    vals = g(params, nodes.ravel()).reshape(nodes.shape)
    cum = np.concatenate([[0.0], np.cumsum((vals * weights).sum(axis=1))])
    total = g_integral(params)
    dens = g(params, edges)
    return CubicHermiteSpline(edges, cum / total, dens / total), lo, hi


def gtilde_cdf(params, x, panel=0.02):
    """CDF of the normalised factor g~_c = g_c / int g_c.

    Built once per parameter set from Gauss-Legendre panel integrals of g_c
    and interpolated with cubic Hermite pieces whose slopes are the exact
    density.
    """
    params = _as_params(params)
    spline, lo, hi = _gtilde_spline(params, float(panel))
    xa = np.asarray(x, dtype=float)
    out = np.clip(spline(np.clip(xa, lo, hi)), 0.0, 1.0)
    out = np.where(xa <= lo, 0.0, np.where(xa >= hi, 1.0, out))
    return out[()] if out.ndim == 0 else out
