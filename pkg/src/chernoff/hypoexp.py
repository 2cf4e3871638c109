"""Hypoexponential densities and the samplers.

* Harrison's closed form for a sum of independent exponentials with
  distinct rates, and a convexity probe for ``(-log f_m)''``.
* The normalised factor g~_c = g_c / int g_c as the law of
  ``-delta - sum_j b_j (E_j - 1)`` with ``b_j = 1 / ((2c^2)^(1/3) a_j)``.
* A rejection sampler for Z_c on a tangent-line envelope of log f, which is
  valid because f is log-concave.
* The Brownian-motion argmax simulation, an oracle that shares nothing with
  the Airy pipeline.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import airy, gfunc
from .errors import ChernoffError, IllConditionedError

__all__ = [
    "HypoExpRates",
    "harrison_pdf",
    "harrison_derivs",
    "ConvexityProbe",
    "vm_convexity_probe",
    "RngSeed",
    "GTildeRep",
    "sample_gtilde",
    "sample_hypoexp",
    "sample_chernoff",
    "SamplerInfo",
    "simulate_argmax",
    "last_argmax",
    "max_threads",
]

MIN_RATE_GAP = 1e-9


def max_threads():
    """Worker cap from CHERNOFF_THREADS (default: CPU count)."""
    env = os.environ.get("CHERNOFF_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# Harrison's formula

@dataclass(frozen=True)
class HypoExpRates:
    """Distinct positive rates lambda_1..lambda_m."""

    lambdas: tuple

    def __init__(self, lambdas):
        lam = tuple(float(x) for x in np.atleast_1d(lambdas))
        if not lam:
            raise ValueError("need at least one rate")
        if any(not (x > 0 and math.isfinite(x)) for x in lam):
            raise ValueError("rates must be positive and finite")
        s = np.sort(lam)
        if s.size > 1 and np.min(np.diff(s) / s[1:]) < MIN_RATE_GAP:
            raise IllConditionedError("rates are (nearly) coincident; Harrison's formula breaks down")
        object.__setattr__(self, "lambdas", lam)

    @property
    def m(self):
        return len(self.lambdas)

    def log_weights(self):
        """log|prod_{i!=j} lam_i / (lam_i - lam_j)| and its sign, per j."""
        lam = np.asarray(self.lambdas)
        diff = lam[:, None] - lam[None, :]          # [i, j] = lam_i - lam_j
        np.fill_diagonal(diff, 1.0)
        lognum = np.log(lam)[:, None] * np.ones_like(diff)
        np.fill_diagonal(lognum, 0.0)
        logw = (lognum - np.log(np.abs(diff))).sum(axis=0)
        sign = np.prod(np.sign(diff), axis=0)
        return logw, sign


def _as_rates(r):
    return r if isinstance(r, HypoExpRates) else HypoExpRates(r)


def _harrison_terms(r, t, order):
    r = _as_rates(r)
    lam = np.asarray(r.lambdas)
    logw, sign = r.log_weights()
    ta = np.atleast_1d(np.asarray(t, dtype=float))
    expo = logw[None, :] + (1 + order) * np.log(lam)[None, :] - lam[None, :] * ta.ravel()[:, None]
    terms = sign[None, :] * (-1.0) ** order * np.exp(expo)
    return terms, np.shape(t)


def harrison_derivs(r, t, order=0):
    """order-th derivative of the hypoexponential density at t >= 0."""
    terms, shape = _harrison_terms(r, t, order)
    # add smallest magnitudes first
    idx = np.argsort(np.abs(terms), axis=1)
    return np.take_along_axis(terms, idx, axis=1).sum(axis=1).reshape(shape)


def harrison_pdf(r, t):
    """Density of X_1 + ... + X_m, X_j ~ Exp(lambda_j) independent.

    ``f_m(t) = sum_j lam_j exp(-lam_j t) prod_{i != j} lam_i / (lam_i - lam_j)``,
    with the products accumulated in log space.  Zero for t < 0.  Small
    negative sums (round-off of the alternating terms) are clamped to 0.

    Raises
    ------
    IllConditionedError
        If the sum is more negative than its own round-off bound.

    >>> round(float(harrison_pdf([1.0, 2.0], 1.0)), 12)
    0.46508831587
    """
    ta = np.asarray(t, dtype=float)
    terms, shape = _harrison_terms(r, np.maximum(ta, 0.0), 0)
    idx = np.argsort(np.abs(terms), axis=1)
    out = np.take_along_axis(terms, idx, axis=1).sum(axis=1).reshape(shape)
    noise = (terms.shape[1] * 4 * np.finfo(float).eps * np.abs(terms).sum(axis=1)).reshape(shape)
    if np.any(out < -(1e-12 + noise)):
        raise IllConditionedError("Harrison sum is negative beyond round-off; rates too close")
    out = np.where(ta < 0, 0.0, np.maximum(out, 0.0))
    return out[()] if out.ndim == 0 else out


@dataclass
class ConvexityProbe:
    grid: np.ndarray
    v: np.ndarray
    second_diff: np.ndarray
    asserted: bool
    tol: float = 1e-6

    @property
    def min_second_diff(self):
        return float(np.min(self.second_diff)) if self.second_diff.size else 0.0

    @property
    def convex(self):
        return self.min_second_diff >= -self.tol


def vm_convexity_probe(r, grid):
    """Second divided differences of v_m = (-log f_m)'' on a grid in (0, inf).

    Convexity is known for m <= 2 and flagged as ``asserted`` there; for
    larger m the probe is data only.
    """
    r = _as_rates(r)
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0):
        raise ValueError("grid must lie in (0, inf)")
    f0 = harrison_derivs(r, grid, 0)
    f1 = harrison_derivs(r, grid, 1)
    f2 = harrison_derivs(r, grid, 2)
    vm = (f1 * f1 - f0 * f2) / (f0 * f0)
    h = np.diff(grid)
    sd = 2.0 * (vm[2:] / (h[1:] * (h[:-1] + h[1:]))
                - vm[1:-1] / (h[:-1] * h[1:])
                + vm[:-2] / (h[:-1] * (h[:-1] + h[1:])))
    return ConvexityProbe(grid=grid, v=vm, second_diff=sd, asserted=r.m <= 2)


# ---------------------------------------------------------------------------
# random streams

@dataclass(frozen=True)
class RngSeed:
    """Seed plus stream id; chunk k of a stream gets its own child generator."""

    seed: int = 0
    stream: int = 0

    def generator(self, chunk=0):
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream, chunk))
        return np.random.Generator(np.random.PCG64(ss))


def _as_seed(seed, stream=0):
    if isinstance(seed, RngSeed):
        return seed
    return RngSeed(int(seed), int(stream))


def _run_chunks(fn, n, chunk):
    """Run fn(k, size) over chunks; order of results is by chunk index."""
    sizes = [min(chunk, n - s) for s in range(0, n, chunk)]
    workers = min(max_threads(), len(sizes))
    if workers <= 1:
        parts = [fn(k, s) for k, s in enumerate(sizes)]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(fn, range(len(sizes)), sizes))
    return np.concatenate(parts) if parts else np.empty(0)


# ---------------------------------------------------------------------------
# g~ as a centred sum of exponentials

@dataclass(frozen=True)
class GTildeRep:
    """Truncated representation Y = -delta - sum_{j<=m} (X_j - b_j).

    ``tail_variance`` is the variance of the omitted terms, exact via
    ``sum_k 1/a_k^2 = nu^2``; ``tail_variance_asymptotic`` estimates the same
    from ``a_k ~ (3 pi (4k-1) / 8)^(2/3)``.
    """

    c: float
    m: int
    b: np.ndarray
    delta: float
    tail_variance: float
    tail_variance_asymptotic: float

    @classmethod
    def from_c(cls, c=1.0, m=400):
        if not c > 0:
            raise ValueError("c must be positive")
        if m < 0:
            raise ValueError("m must be nonnegative")
        k = airy.airy_constants()
        s = (2.0 * c * c) ** (-1.0 / 3.0)
        a = airy.airy_zeros(m)
        b = s / a
        b.setflags(write=False)
        tail = s * s * (k.nu ** 2 - float(np.sum(1.0 / a ** 2)))
        # integral of (3 pi (4j - 1) / 8)^(-4/3) over j > m + 1/2
        asym = s * s * 3.0 * (1.5 * math.pi) ** (-4.0 / 3.0) * (m + 0.25) ** (-1.0 / 3.0)
        return cls(c=float(c), m=int(m), b=b, delta=-s * k.nu,
                   tail_variance=max(tail, 0.0), tail_variance_asymptotic=asym)

    @property
    def rates(self):
        return HypoExpRates(1.0 / self.b)

    @property
    def mean(self):
        return -self.delta

    @property
    def variance(self):
        """Variance of the full (untruncated) law, nu^2 (2c^2)^(-2/3)."""
        return float(np.sum(self.b ** 2)) + self.tail_variance


def sample_gtilde(rep, n, seed=0, stream=0, gaussian_tail=True, chunk=2000):
    """n draws of Y = -delta - sum_{j<=m} b_j (E_j - 1), E_j ~ Exp(1).

    With ``gaussian_tail`` the omitted terms j > m are replaced by a normal
    variable of the exact tail variance (they are a sum of many small
    centred terms); without it the draws carry a truncation bias of that
    variance.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rep = rep if isinstance(rep, GTildeRep) else GTildeRep.from_c(1.0, int(rep))
    rs = _as_seed(seed, stream)
    b = np.asarray(rep.b)
    sd_tail = math.sqrt(rep.tail_variance) if gaussian_tail else 0.0

    def work(k, size):
        rng = rs.generator(k)
        y = np.full(size, -rep.delta)
        if b.size:
            e = rng.standard_exponential((size, b.size))
            y -= (e - 1.0) @ b
        if sd_tail:
            y -= sd_tail * rng.standard_normal(size)
        return y

    return _run_chunks(work, int(n), chunk)


def sample_hypoexp(r, n, seed=0, stream=0, chunk=20000):
    """n draws of X_1 + ... + X_m with X_j ~ Exp(lambda_j) independent."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r = _as_rates(r)
    scale = 1.0 / np.asarray(r.lambdas)
    rs = _as_seed(seed, stream)

    def work(k, size):
        return rs.generator(k).standard_exponential((size, scale.size)) @ scale

    return _run_chunks(work, int(n), chunk)


# ---------------------------------------------------------------------------
# log-concave envelope sampler for Z_c

@dataclass
class SamplerInfo:
    acceptance_rate: float
    support_points: np.ndarray
    density_evaluations: int


class _Envelope:
    """Tangent-line upper hull and chord squeeze for a concave log-density."""

    def __init__(self, x, h, dh):
        order = np.argsort(x)
        self.x, self.h, self.dh = x[order], h[order], dh[order]
        if not (self.dh[0] > 0 and self.dh[-1] < 0):
            raise ChernoffError("envelope needs support points on both sides of the mode")
        x, h, dh = self.x, self.h, self.dh
        denom = dh[:-1] - dh[1:]
        if np.any(denom <= 0):
            raise ChernoffError("log-density slopes are not decreasing; not log-concave here")
        z = (h[1:] - h[:-1] - x[1:] * dh[1:] + x[:-1] * dh[:-1]) / denom
        self.z = np.concatenate([[-np.inf], z, [np.inf]])
        hmax = h.max()
        self.hmax = hmax
        mass = np.empty(x.size)
        for j in range(x.size):
            mass[j] = self._segment_mass(j, hmax)
        self.mass = mass
        self.cum = np.cumsum(mass) / mass.sum()

    def _segment_mass(self, j, shift):
        lo, hi = self.z[j], self.z[j + 1]
        a, x0, h0 = self.dh[j], self.x[j], self.h[j] - shift
        if a == 0.0:
            return math.exp(h0) * (hi - lo)
        # int_lo^hi exp(h0 + a (t - x0)) dt, finite because a > 0 on the left end
        ulo, uhi = a * (lo - x0), a * (hi - x0)
        if a > 0:
            return math.exp(h0 + uhi) * -math.expm1(ulo - uhi) / a
        return math.exp(h0 + ulo) * -math.expm1(uhi - ulo) / -a

    def upper(self, t):
        j = np.searchsorted(self.z, t) - 1
        return self.h[j] + self.dh[j] * (t - self.x[j])

    def lower(self, t):
        i = np.searchsorted(self.x, t) - 1
        ok = (i >= 0) & (i < self.x.size - 1)
        ic = np.clip(i, 0, self.x.size - 2)
        x0, x1 = self.x[ic], self.x[ic + 1]
        val = self.h[ic] + (self.h[ic + 1] - self.h[ic]) * (t - x0) / (x1 - x0)
        return np.where(ok, val, -np.inf)

    def draw(self, rng, size):
        j = np.searchsorted(self.cum, rng.random(size))
        j = np.minimum(j, self.x.size - 1)
        u = rng.random(size)
        a = self.dh[j]
        x0 = self.x[j]
        lo, hi = self.z[j], self.z[j + 1]
        out = np.empty(size)
        flat = a == 0.0
        out[flat] = lo[flat] + u[flat] * (hi[flat] - lo[flat])
        pos = a > 0
        # inverse CDF of exp(a t) restricted to [lo, hi], anchored at the open end
        if pos.any():
            ap, hp, lp = a[pos], hi[pos], lo[pos]
            span = np.where(np.isinf(lp), -np.inf, ap * (lp - hp))
            out[pos] = hp + np.log(u[pos] + (1 - u[pos]) * np.exp(span)) / ap
        neg = a < 0
        if neg.any():
            an, hn, ln = a[neg], hi[neg], lo[neg]
            span = np.where(np.isinf(hn), -np.inf, an * (hn - ln))
            out[neg] = ln + np.log(u[neg] + (1 - u[neg]) * np.exp(span)) / an
        return out


def _logf_and_slope(dist, t):
    t = np.asarray(t, dtype=float)
    d = gfunc.g_derivs(dist.gparams, np.concatenate([t, -t]), (0, 1))
    n = t.size
    g_pos, g_neg = d[0, :n], d[0, n:]
    dg_pos, dg_neg = d[1, :n], d[1, n:]
    with np.errstate(divide="ignore", invalid="ignore"):
        logf = np.log(0.5 * g_pos * g_neg)
        slope = dg_pos / g_pos - dg_neg / g_neg
    return logf, slope


def sample_chernoff(dist, n, seed=0, stream=0, target_acceptance=0.99,
                    max_support=60, batch=20000, full_output=False):
    """n draws from f_{Z_c} by envelope rejection.

    The envelope is the upper hull of tangent lines to log f at adaptive
    support points: candidates that reach the exact density test during a
    warm-up pass are added as new support points until the envelope's
    acceptance probability passes `target_acceptance`.  A chord squeeze
    accepts most candidates without evaluating f at all.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rs = _as_seed(seed, stream)
    rng = rs.generator(0)
    scale = dist.c ** (-2.0 / 3.0)
    pts = scale * np.array([-1.6, -0.9, -0.4, 0.0, 0.4, 0.9, 1.6])
    h, dh = _logf_and_slope(dist, pts)
    evals = pts.size
    env = _Envelope(pts, h, dh)

    # warm-up: grow the support set where the hull is loose
    for _ in range(20):
        norm_const = np.exp(env.hmax) * env.mass.sum()
        # envelope mass relative to the (unit) target mass
        if 1.0 / norm_const >= target_acceptance or env.x.size >= max_support:
            break
        cand = env.draw(rng, 200)
        gap = env.upper(cand) - env.lower(cand)
        worst = cand[np.argsort(gap)[-4:]]
        worst = worst[np.all(np.abs(worst[:, None] - env.x[None, :]) > 1e-6, axis=1)]
        if worst.size == 0:
            break
        h_new, dh_new = _logf_and_slope(dist, worst)
        evals += worst.size
        env = _Envelope(np.concatenate([env.x, worst]), np.concatenate([env.h, h_new]),
                        np.concatenate([env.dh, dh_new]))

    out = []
    have = 0
    proposed = 0
    while have < n:
        cand = env.draw(rng, batch)
        u = np.log(rng.random(batch))
        up = env.upper(cand)
        low = env.lower(cand)
        accept = u <= low - up
        rest = ~accept
        if rest.any():
            logf, _ = _logf_and_slope(dist, cand[rest])
            evals += int(rest.sum())
            if np.any(logf > env.upper(cand[rest]) + 1e-9):
                raise ChernoffError("density exceeds its tangent envelope; log-concavity violated numerically")
            accept[rest] = u[rest] <= logf - up[rest]
        proposed += batch
        got = cand[accept]
        out.append(got)
        have += got.size
    samples = np.concatenate(out)[:n]
    if full_output:
        info = SamplerInfo(acceptance_rate=have / proposed, support_points=env.x.copy(),
                           density_evaluations=evals)
        return samples, info
    return samples


# ---------------------------------------------------------------------------
# Brownian argmax oracle

def last_argmax(left, right, t):
    """Largest maximiser of a path pinned to 0 at the origin.

    `right[:, k]` is the path at ``t[k]`` and `left[:, k]` at ``-t[k]``;
    ties are broken toward the largest time.
    """
    K = right.shape[1]
    max_r = right.max(axis=1)
    last_r = K - 1 - np.argmax(right[:, ::-1], axis=1)
    max_l = left.max(axis=1)
    first_l = np.argmax(left, axis=1)
    return np.where(max_r >= np.maximum(max_l, 0.0), t[last_r],
                    np.where(max_l <= 0.0, 0.0, -t[first_l]))


def simulate_argmax(c=1.0, half_width=None, step=1e-3, n=10_000, seed=0, stream=0, chunk=500):
    """Grid approximation of Z_c = sup argmax_t {W(t) - c t^2}.

    Each replicate pins W(0) = 0 and builds W on ``step * k`` for
    ``|k| <= half_width / step`` from two independent Gaussian random walks
    (increment variance `step`).  The largest maximising grid point is
    returned.  A warning is issued if any replicate peaks on the boundary.
    """
    if not c > 0:
        raise ValueError("c must be positive")
    if half_width is None:
        half_width = 3.0 * c ** (-2.0 / 3.0)
    if half_width < 3.0 * c ** (-2.0 / 3.0) - 1e-12:
        warnings.warn("half_width below 3 c^(-2/3); boundary effects likely", stacklevel=2)
    K = int(round(half_width / step))
    if K < 1:
        raise ValueError("half_width must exceed step")
    t = step * np.arange(1, K + 1)
    drift = c * t * t
    rs = _as_seed(seed, stream)
    sd = math.sqrt(step)

    def work(k, size):
        rng = rs.generator(k)
        right = np.cumsum(rng.standard_normal((size, K)), axis=1)
        right *= sd
        right -= drift
        left = np.cumsum(rng.standard_normal((size, K)), axis=1)
        left *= sd
        left -= drift
        return last_argmax(left, right, t)

    z = _run_chunks(work, int(n), chunk)
    on_edge = int(np.sum(np.abs(z) >= K * step - 0.5 * step))
    if on_edge:
        warnings.warn(f"{on_edge} argmax samples on the window boundary; widen half_width",
                      stacklevel=2)
    return z
