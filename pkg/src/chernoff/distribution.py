"""Chernoff's distribution: the law of argmax_t {W(t) - c t^2}.

The density is ``f(t) = g_c(t) g_c(-t) / 2`` with g_c from :mod:`chernoff.gfunc`.
:class:`ChernoffDist` tabulates the CDF once on Chebyshev-spaced knots
(exact Gauss-Legendre integration between knots, cubic Hermite interpolation
with the exact density as slope) and answers pdf/cdf/quantile/moment queries
from that cache.  The remaining functions are the log-concavity diagnostics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from . import gfunc
from ._quadrature import gauss_legendre_panels, panel_rule
from . import airy
from .errors import DomainError, PrecisionError

__all__ = [
    "ChernoffDist",
    "DiagnosticsReport",
    "TransportReport",
    "scaling_check",
    "w",
    "sigma0",
    "strong_lc_profile",
    "pf2_check",
    "pf2_random_min",
    "correlation_inequality",
    "correlation_terms",
    "transport_map",
]

_GL_ORDER = 8


class ChernoffDist:
    """Distribution of Z_c = sup argmax {W(t) - c t^2}.

    Parameters
    ----------
    c : float
        Drift coefficient, c > 0.
    quad : QuadratureConfig, optional
        Settings for the g_c Fourier integral.
    half_width : float, optional
        L of the working interval [-L, L].  Defaults to ``3 c**(-2/3)``.
    knots : int
        Number of Chebyshev-Lobatto knots of the CDF cache.
    """

    def __init__(self, c=1.0, quad=None, half_width=None, knots=1200):
        self.gparams = gfunc.GParams(float(c), quad or gfunc.QuadratureConfig())
        self.c = self.gparams.c
        self.half_width = float(half_width if half_width is not None
                                else 3.0 * self.c ** (-2.0 / 3.0))
        if knots < 16:
            raise ValueError("need at least 16 knots")
        self._build_cache(int(knots))

    def __repr__(self):
        return f"ChernoffDist(c={self.c!r}, half_width={self.half_width!r})"

    # -- construction -----------------------------------------------------
    def _build_cache(self, n):
        L = self.half_width
        j = np.arange(n)
        knots = -L * np.cos(np.pi * j / (n - 1))
        knots[0], knots[-1] = -L, L
        # tails [-2L, -L] and [L, 2L] on a uniform sub-grid
        tail = np.linspace(L, 2.0 * L, 41)
        left_edges = -tail[::-1]
        edges = np.concatenate([left_edges[:-1], knots, tail[1:]])
        nodes, weights = gauss_legendre_panels(edges, _GL_ORDER)
        f_nodes = self.pdf(nodes.ravel()).reshape(nodes.shape)
        pieces = (weights * f_nodes).sum(axis=1)
        cum = np.concatenate([[0.0], np.cumsum(pieces)])
        first = left_edges.size - 1
        F_knots = cum[first:first + n]
        f_knots = self.pdf(knots)
        if np.any(np.diff(F_knots) <= 0):
            raise PrecisionError("tabulated CDF is not strictly increasing")
        # Fritsch-Carlson: slopes within [0, 3] x secant make each cubic piece monotone
        secant = np.diff(F_knots) / np.diff(knots)
        ratio = np.concatenate([f_knots[:-1] / secant, f_knots[1:] / secant])
        if np.any(ratio < 0) or np.any(ratio > 3.0):
            raise PrecisionError("Hermite CDF interpolant would not be monotone; add knots")

        self._edges = edges
        self._cum = cum
        self._nodes = nodes
        self._weights = weights
        self._f_nodes = f_nodes
        self.knots = knots
        self.knot_cdf = F_knots
        self.knot_pdf = f_knots
        self._spline = CubicHermiteSpline(knots, F_knots, f_knots)
        # beyond [-L, L] f is below quadrature noise; monotone interpolation of the panel sums
        self._tail = PchipInterpolator(edges, cum)
        self.total_mass = float(cum[-1])

    # -- density ------------------------------------------------------------
    def pdf(self, t):
        """f_{Z_c}(t) = g_c(t) g_c(-t) / 2."""
        ta = np.atleast_1d(np.asarray(t, dtype=float))
        flat = ta.ravel()
        both = gfunc.g(self.gparams, np.concatenate([flat, -flat]))
        out = 0.5 * both[:flat.size] * both[flat.size:]
        out = out.reshape(ta.shape)
        return out if np.ndim(t) else float(out[0])

    def logpdf(self, t):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(t))

    # -- distribution function ---------------------------------------------
    def _cdf_integrated(self, t):
        """cdf from cached panel sums plus a fresh GL piece up to t."""
        t = np.clip(t, self._edges[0], self._edges[-1])
        idx = np.clip(np.searchsorted(self._edges, t, side="right") - 1, 0, self._edges.size - 2)
        lo = self._edges[idx]
        x, wts = np.polynomial.legendre.leggauss(_GL_ORDER)
        half = 0.5 * (t - lo)
        pts = lo[:, None] + half[:, None] * (x[None, :] + 1.0)
        part = (half[:, None] * wts[None, :] * self.pdf(pts.ravel()).reshape(pts.shape)).sum(axis=1)
        return self._cum[idx] + part

    def cdf(self, t, exact=False):
        """P(Z_c <= t).

        Inside [-L, L] the cached Hermite interpolant is used (error ~1e-11).
        The tails beyond L (total mass ~1e-12 at c = 1) use a monotone
        interpolant of the tabulated panel sums.  With ``exact=True`` the
        density is integrated directly from the nearest tabulated panel edge.
        """
        ta = np.atleast_1d(np.asarray(t, dtype=float))
        flat = ta.ravel()
        out = np.empty_like(flat)
        L = self.half_width
        inside = (np.abs(flat) <= L) & (not exact)
        if inside.any():
            out[inside] = self._spline(flat[inside])
        tails = ~inside & (not exact)
        if tails.any():
            e = self._edges
            out[tails] = self._tail(np.clip(flat[tails], e[0], e[-1]))
        if exact:
            out[:] = self._cdf_integrated(flat)
        out = np.clip(out, 0.0, 1.0).reshape(ta.shape)
        return out if np.ndim(t) else float(out[0])

    def sf(self, t):
        return 1.0 - self.cdf(t)

    def quantile(self, p):
        """Inverse CDF.

        Bracket on the knot table, solve the Hermite cubic with Brent's
        method, then polish with one Newton step on the exact CDF.
        """
        pa = np.atleast_1d(np.asarray(p, dtype=float))
        if np.any(~((pa > 0) & (pa < 1))):
            raise DomainError("quantile needs 0 < p < 1")
        out = np.empty(pa.size)
        F = self.knot_cdf
        for i, pi in enumerate(pa.ravel()):
            j = np.searchsorted(F, pi)
            if j == 0 or j == F.size:
                # beyond the cache: bisect the integrated tail
                lo, hi = ((self._edges[0], self.knots[0]) if j == 0
                          else (self.knots[-1], self._edges[-1]))
                root = optimize.brentq(lambda s: self._cdf_integrated(np.array([s]))[0] - pi,
                                       lo, hi, xtol=1e-14)
            else:
                a, b = self.knots[j - 1], self.knots[j]
                root = optimize.brentq(lambda s: self._spline(s) - pi, a, b, xtol=1e-15)
            out[i] = root
        fx = self.pdf(out)
        ok = fx > 0
        out[ok] -= (self._cdf_integrated(out[ok]) - pa.ravel()[ok]) / fx[ok]
        out = out.reshape(pa.shape)
        return out if np.ndim(p) else float(out[0])

    ppf = quantile

    def moment(self, k):
        """Raw moment E Z_c^k, 1 <= k <= 8, from the cached panel quadrature."""
        k = int(k)
        if not 1 <= k <= 8:
            raise ValueError("moment order must be in 1..8")
        return float(np.sum(self._weights * self._nodes ** k * self._f_nodes))

    def mean(self):
        return self.moment(1)

    def var(self):
        return self.moment(2) - self.moment(1) ** 2

    # -- log-concavity ------------------------------------------------------
    def w(self, t):
        """(-log f)''(t) = v(t) + v(-t)."""
        return w(self, t)

    def rvs(self, n, seed=0, stream=0):
        """n draws via the log-concave envelope sampler."""
        from .hypoexp import sample_chernoff
        return sample_chernoff(self, n, seed=seed, stream=stream)


# ---------------------------------------------------------------------------

def _as_dist(d):
    return d if isinstance(d, ChernoffDist) else ChernoffDist(float(d))


def scaling_check(c, t, quad=None, base=None):
    """Residual f_{Z_c}(t) - c^(2/3) f_1(c^(2/3) t), both sides by quadrature.

    The density of Z_c is evaluated directly from g_c (which uses Ai at
    i (2c^2)^(-1/3) u), independently of the c = 1 density on the right.
    """
    quad = quad or gfunc.QuadratureConfig()
    t = np.asarray(t, dtype=float)
    if c == 1.0:
        return np.zeros_like(t)[()]
    left = _pdf_raw(gfunc.GParams(c, quad), t)
    right = c ** (2.0 / 3.0) * _pdf_raw(gfunc.GParams(1.0, quad), c ** (2.0 / 3.0) * t)
    return left - right


def _pdf_raw(params, t):
    flat = np.atleast_1d(t).ravel()
    both = gfunc.g(params, np.concatenate([flat, -flat]))
    out = (0.5 * both[:flat.size] * both[flat.size:]).reshape(np.shape(t))
    return out[()] if out.ndim == 0 else out


def w(d, t, floor=1e-10):
    """(-log f_{Z_c})''(t) = v(t) + v(-t), from analytic derivatives of g_c."""
    d = _as_dist(d)
    ta = np.atleast_1d(np.asarray(t, dtype=float))
    flat = ta.ravel()
    vv = np.atleast_1d(gfunc.v(d.gparams, np.concatenate([flat, -flat]), floor=floor))
    out = (vv[:flat.size] + vv[flat.size:]).reshape(ta.shape)
    return out if np.ndim(t) else float(out[0])


def sigma0(d=None):
    """sigma_0 = w(0)^(-1/2) for the standard (c = 1) Chernoff law."""
    d = _as_dist(1.0 if d is None else d)
    if d.c != 1.0:
        raise DomainError("sigma0 is defined for c = 1")
    return w(d, 0.0) ** -0.5


def pf2_check(d, x, y):
    """det [[f(x1-y1), f(x1-y2)], [f(x2-y1), f(x2-y2)]] for x1<=x2, y1<=y2.

    `x` and `y` are pairs, or arrays of shape (..., 2) for many at once.
    """
    d = _as_dist(d)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x[..., 0] > x[..., 1]) or np.any(y[..., 0] > y[..., 1]):
        raise ValueError("pf2_check needs x1 <= x2 and y1 <= y2")
    diffs = np.stack([x[..., 0] - y[..., 0], x[..., 0] - y[..., 1],
                      x[..., 1] - y[..., 0], x[..., 1] - y[..., 1]])
    f = d.pdf(diffs.ravel()).reshape(diffs.shape)
    det = f[0] * f[3] - f[1] * f[2]
    return det if det.ndim else float(det)


def pf2_random_min(d, draws=10_000, spread=None, seed=0):
    """Smallest PF2 determinant over random ordered quadruples."""
    d = _as_dist(d)
    spread = spread if spread is not None else 0.5 * d.half_width
    rng = np.random.default_rng(seed)
    x = np.sort(rng.uniform(-spread, spread, size=(draws, 2)), axis=1)
    y = np.sort(rng.uniform(-spread, spread, size=(draws, 2)), axis=1)
    return float(np.min(pf2_check(d, x, y)))


def correlation_terms(x, y, quad=None):
    """The three u-integrals built on phi, psi and h = 1/|Ai(iu)|.

    With ``E(u) = exp(iux) Ai(iu)``, ``phi = Re(E) h`` and ``psi = Im(E) h``:

        I1 = int_0^U sin^2(uy) phi h du
        I2 = int_0^U cos^2(uy) phi h du
        I3 = int_0^U sin(uy) cos(uy) psi h du

    Returns arrays (I1, I2, I3) broadcast over x and y.
    """
    quad = quad or gfunc.QuadratureConfig()
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    shape = x.shape
    x, y = x.ravel(), y.ravel()
    base = gfunc.GParams(2.0 ** -0.5, quad)
    upper = gfunc._effective_limit(base)
    freq = 1.0 + np.max(np.abs(x)) + 2.0 * np.max(np.abs(y)) if x.size else 1.0
    u, wk, _ = panel_rule(0.0, upper, quad.panel_width / freq)
    ai = airy.ai(1j * u)
    h2 = 1.0 / np.abs(ai) ** 2
    E = np.exp(1j * np.outer(x, u)) * ai
    phih = E.real * h2
    psih = E.imag * h2
    su, cu = np.sin(np.outer(y, u)), np.cos(np.outer(y, u))
    I1 = (su * su * phih) @ wk
    I2 = (cu * cu * phih) @ wk
    I3 = (su * cu * psih) @ wk
    return I1.reshape(shape), I2.reshape(shape), I3.reshape(shape)


def correlation_inequality(x, y, quad=None, squared_cross_term=False):
    """Left side ``I1 * I2 + I3`` of the Airy-kernel correlation inequality.

    With ``squared_cross_term=True`` returns ``I1 * I2 + I3**2`` instead,
    which equals ``(pi^2/8) (G(x)^2 - G(x-2y) G(x+2y))`` for
    ``G = g_{2^-1/2}`` and is therefore the PF2 property of g in disguise.
    The unsquared form is not sign-definite (it is negative at x=3, y=-1).
    """
    I1, I2, I3 = correlation_terms(x, y, quad)
    cross = I3 * I3 if squared_cross_term else I3
    out = I1 * I2 + cross
    return out if out.ndim else float(out)


@dataclass
class TransportReport:
    z: np.ndarray
    T: np.ndarray
    clamped: np.ndarray
    derivative_points: np.ndarray = field(default_factory=lambda: np.array([-1.0, 0.0, 1.0]))
    derivative: np.ndarray = None
    vanzwet_grid: np.ndarray = None
    vanzwet_second_diff: np.ndarray = None

    @property
    def contraction_observed(self):
        return bool(np.all(self.derivative <= 1.0))

    @property
    def vanzwet_convex_observed(self):
        return bool(np.all(self.vanzwet_second_diff >= -1e-8))


def transport_map(d, z, full_output=False, h=1e-3, vanzwet_grid=None):
    """T(z) = F_Z^{-1}(Phi(z)), pushing N(0,1) onto Z_1.

    |z| > 5 is clamped to +-5 (flagged).  With ``full_output`` a
    :class:`TransportReport` also carries central-difference T' at
    z in {-1, 0, 1} and second divided differences of
    ``T^{-1}(w) = Phi^{-1}(F_Z(w))`` on w > 0.  Neither is asserted.
    """
    d = _as_dist(d)
    za = np.atleast_1d(np.asarray(z, dtype=float))
    clamped = np.abs(za) > 5.0
    zc = np.clip(za, -5.0, 5.0)
    T = d.quantile(special.ndtr(zc))
    if not full_output:
        T = T.reshape(za.shape)
        return T if np.ndim(z) else float(T[0])
    pts = np.array([-1.0, 0.0, 1.0])
    Tp = (d.quantile(special.ndtr(pts + h)) - d.quantile(special.ndtr(pts - h))) / (2 * h)
    grid = vanzwet_grid if vanzwet_grid is not None else np.linspace(0.05, 2.0, 40)
    tinv = special.ndtri(d.cdf(grid, exact=True))
    step = np.diff(grid)
    second = 2.0 * (tinv[2:] / (step[1:] * (step[:-1] + step[1:]))
                    - tinv[1:-1] / (step[:-1] * step[1:])
                    + tinv[:-2] / (step[:-1] * (step[:-1] + step[1:])))
    return TransportReport(z=za, T=T, clamped=clamped, derivative_points=pts,
                           derivative=Tp, vanzwet_grid=grid, vanzwet_second_diff=second)


@dataclass
class DiagnosticsReport:
    """Grid diagnostics of f = f_{Z_c}: density, -log f, w = (-log f)''.

    Scalars: pf2_min_det (random PF2 determinants), corr_residual_min
    (printed-form correlation inequality), corr_squared_min (squared-cross
    form), sigma0_est, strong_lc_margin = min w(t) - w(0), and the
    conjecture-only flags.
    """

    c: float
    grid: np.ndarray
    f: np.ndarray
    neg_log_f: np.ndarray
    w: np.ndarray
    w0: float
    sigma0_est: float
    strong_lc_margin: float
    pf2_min_det: float = float("nan")
    corr_residual_min: float = float("nan")
    corr_squared_min: float = float("nan")
    v_second_diff: np.ndarray = None
    v_convexity_violations: int = 0
    strong_lc_ok: bool = True

    def __post_init__(self):
        n = len(self.grid)
        for name in ("f", "neg_log_f", "w"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} is not aligned with grid")

    @property
    def logconcave_ok(self):
        return bool(np.all(self.w >= -1e-6))

    def summary(self):
        return {
            "schema_version": 1,
            "c": self.c,
            "w0": self.w0,
            "sigma0": self.sigma0_est,
            "strong_lc_margin": self.strong_lc_margin,
            "strong_lc_ok": self.strong_lc_ok,
            "pf2_min_det": self.pf2_min_det,
            "corr_min": self.corr_residual_min,
            "corr_squared_min": self.corr_squared_min,
            "w_min": float(np.min(self.w)),
            "v_convexity_violations": self.v_convexity_violations,
            "grid": {"from": float(self.grid[0]), "to": float(self.grid[-1]), "n": len(self.grid)},
        }


def _second_divided(x, y):
    hx = np.diff(x)
    return 2.0 * (y[2:] / (hx[1:] * (hx[:-1] + hx[1:]))
                  - y[1:-1] / (hx[:-1] * hx[1:])
                  + y[:-2] / (hx[:-1] * (hx[:-1] + hx[1:])))


def strong_lc_profile(d, grid, pf2_draws=10_000, corr_step=0.25, corr_range=3.0,
                      seed=0, margin_tol=1e-6):
    """Fill a :class:`DiagnosticsReport` over `grid`.

    strong_lc_margin >= -margin_tol is evidence for (not proof of) strong
    log-concavity; a violation only clears ``strong_lc_ok``.  Second divided
    differences of v = (-log g_c)'' are recorded and counted, not asserted.
    Set ``pf2_draws=0`` or ``corr_step=None`` to skip those scans.
    """
    d = _as_dist(d)
    grid = np.asarray(grid, dtype=float)
    if not np.all(np.isfinite(grid)):
        raise ValueError("grid must be finite")
    f = d.pdf(grid)
    ww = np.atleast_1d(w(d, grid))
    w0 = w(d, 0.0)
    margin = float(np.min(ww) - w0)
    vv = np.atleast_1d(gfunc.v(d.gparams, grid))
    v2 = _second_divided(grid, vv) if grid.size >= 3 else np.empty(0)
    with np.errstate(divide="ignore"):
        nlf = -np.log(f)
    report = DiagnosticsReport(
        c=d.c, grid=grid, f=f, neg_log_f=nlf, w=ww, w0=w0,
        sigma0_est=w0 ** -0.5, strong_lc_margin=margin,
        v_second_diff=v2, v_convexity_violations=int(np.sum(v2 < -1e-6)),
        strong_lc_ok=margin >= -margin_tol,
    )
    if pf2_draws:
        report.pf2_min_det = pf2_random_min(d, pf2_draws, seed=seed)
    if corr_step:
        ax = np.arange(-corr_range, corr_range + 0.5 * corr_step, corr_step)
        X, Y = np.meshgrid(ax, ax, indexing="ij")
        I1, I2, I3 = correlation_terms(X, Y, d.gparams.quad)
        report.corr_residual_min = float(np.min(I1 * I2 + I3))
        report.corr_squared_min = float(np.min(I1 * I2 + I3 * I3))
    return report
