"""Airy function Ai and its derivative for complex arguments.

Evaluation strategy
-------------------
* ``|z| <= SERIES_RADIUS``: Maclaurin series ``Ai = c1 f(z) - c2 g(z)``.
  Where the series terms are much larger than the result (the recessive
  sector and the negative real axis) the sum is carried in double-double
  arithmetic, which keeps about 32 significant digits through the
  cancellation.
* ``|z| > SERIES_RADIUS``: the Poincare asymptotic expansion in
  ``zeta = (2/3) z**1.5``, optimally truncated, with the rotation identity
  ``Ai(z) = -w Ai(w z) - w**2 Ai(w**2 z)`` (``w = exp(2 pi i / 3)``) used
  when ``|arg z| > 2 pi / 3``.

Only the upper half plane is evaluated; the lower half follows from
``Ai(conj z) = conj Ai(z)``, so that symmetry holds bit-for-bit.

The module also provides the negative zeros ``-a_k`` of Ai and the
truncated Hadamard product built from them.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError

__all__ = [
    "AiryConstants",
    "airy_constants",
    "ai",
    "ai_prime",
    "airy_pair",
    "airy_zero",
    "airy_zeros",
    "airy_zero_seed",
    "ai_hadamard",
    "SERIES_RADIUS",
    "MAX_ZEROS",
]

SERIES_RADIUS = 8.0
MAX_ZEROS = 2000
SERIES_REL_CUTOFF = 1e-18
# log of the tolerated cancellation factor before switching to double-double
_PLAIN_SERIES_LOSS = 6.0
_UNDERFLOW_LOG = -745.0

# Ai(0) and -Ai'(0) split into double-double (hi, lo) pairs; both come from
# the Gamma-function closed forms evaluated at 50 digits.
_C1_HI, _C1_LO = 0.3550280538878172, 2.05233632436212e-17
_C2_HI, _C2_LO = 0.2588194037928068, -2.522243111610832e-17

_OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)
_OMEGA2 = _OMEGA.conjugate()
_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class AiryConstants:
    """Ai(0), Ai'(0) and nu = -Ai'(0)/Ai(0)."""

    ai0: float
    ai_prime0: float
    nu: float


def airy_constants():
    """Closed-form values of Ai(0), Ai'(0) and nu.

    >>> k = airy_constants()
    >>> round(k.ai0, 5), round(k.ai_prime0, 5), round(k.nu, 6)
    (0.35503, -0.25882, 0.729011)
    """
    ai0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
    ai_prime0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))
    return AiryConstants(ai0=ai0, ai_prime0=ai_prime0, nu=-ai_prime0 / ai0)


# ---------------------------------------------------------------------------
# double-double helpers (elementwise on float64 arrays)

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = 134217729.0 * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    return _quick_two_sum(s, e + al + bl)


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    return _quick_two_sum(p, e + ah * bl + al * bh)


def _dd_div_scalar(ah, al, b):
    q1 = ah / b
    p1, p2 = _two_prod(q1, b)
    s, e = _two_sum(ah, -p1)
    e = e - p2 + al
    return _quick_two_sum(q1, (s + e) / b)


class _CDD:
    """Complex double-double array: (re_hi, re_lo, im_hi, im_lo)."""

    __slots__ = ("rh", "rl", "ih", "il")

    def __init__(self, rh, rl, ih, il):
        self.rh, self.rl, self.ih, self.il = rh, rl, ih, il

    @classmethod
    def from_complex(cls, z):
        zero = np.zeros(z.shape)
        return cls(z.real.copy(), zero, z.imag.copy(), zero.copy())

    def __add__(self, o):
        rh, rl = _dd_add(self.rh, self.rl, o.rh, o.rl)
        ih, il = _dd_add(self.ih, self.il, o.ih, o.il)
        return _CDD(rh, rl, ih, il)

    def __mul__(self, o):
        ac = _dd_mul(self.rh, self.rl, o.rh, o.rl)
        bd = _dd_mul(self.ih, self.il, o.ih, o.il)
        ad = _dd_mul(self.rh, self.rl, o.ih, o.il)
        bc = _dd_mul(self.ih, self.il, o.rh, o.rl)
        rh, rl = _dd_add(ac[0], ac[1], -bd[0], -bd[1])
        ih, il = _dd_add(ad[0], ad[1], bc[0], bc[1])
        return _CDD(rh, rl, ih, il)

    def scale(self, hi, lo):
        """Multiply by the real double-double constant (hi, lo)."""
        rh, rl = _dd_mul(self.rh, self.rl, hi, lo)
        ih, il = _dd_mul(self.ih, self.il, hi, lo)
        return _CDD(rh, rl, ih, il)

    def div_scalar(self, d):
        rh, rl = _dd_div_scalar(self.rh, self.rl, d)
        ih, il = _dd_div_scalar(self.ih, self.il, d)
        return _CDD(rh, rl, ih, il)

    def abs_hi(self):
        return np.hypot(self.rh, self.ih)

    def to_complex(self):
        return (self.rh + self.rl) + 1j * (self.ih + self.il)


# ---------------------------------------------------------------------------
# Maclaurin series

def _series_plain(z):
    """Ai, Ai' by the Maclaurin series in ordinary complex arithmetic.

    Term recurrences, with w = z**3:
    f  = sum a_k w^k,                a_k / a_(k-1) = 1 / ((3k-1) 3k)
    g  = sum b_k z w^k,              b_k / b_(k-1) = 1 / (3k (3k+1))
    f' = sum p_k, p_1 = z^2/2,       p_k / p_(k-1) = w / ((3k-1)(3k-3))
    g' = sum q_k, q_0 = 1,           q_k / q_(k-1) = w / ((3k-2) 3k)
    """
    w = z ** 3
    tf = np.ones_like(z)
    tg = z.copy()
    tp = 0.5 * z * z
    tq = np.ones_like(z)
    f, g, fp, gp = tf.copy(), tg.copy(), tp.copy(), tq.copy()
    for k in range(1, 200):
        if k > 1:
            tp = tp * w / ((3 * k - 1) * (3 * k - 3))
            fp += tp
        tf = tf * w / ((3 * k - 1) * (3 * k))
        tg = tg * w / ((3 * k) * (3 * k + 1))
        tq = tq * w / ((3 * k - 2) * (3 * k))
        f += tf
        g += tg
        gp += tq
        big = np.maximum(np.maximum(np.abs(tf), np.abs(tg)),
                         np.maximum(np.abs(tp), np.abs(tq)))
        if np.all(big <= SERIES_REL_CUTOFF * np.maximum(np.abs(f), 1e-300)):
            break
    c1 = _C1_HI + _C1_LO
    c2 = _C2_HI + _C2_LO
    return c1 * f - c2 * g, c1 * fp - c2 * gp


def _series_dd(z):
    """As :func:`_series_plain`, carried in double-double arithmetic."""
    zd = _CDD.from_complex(z)
    z2 = zd * zd
    w = z2 * zd
    shape = z.shape
    one = _CDD(np.ones(shape), np.zeros(shape), np.zeros(shape), np.zeros(shape))
    tf, tg, tp, tq = one, zd, z2.div_scalar(2.0), one
    f, g, fp, gp = tf, tg, tp, tq
    for k in range(1, 200):
        if k > 1:
            tp = (tp * w).div_scalar(float((3 * k - 1) * (3 * k - 3)))
            fp = fp + tp
        tf = (tf * w).div_scalar(float((3 * k - 1) * (3 * k)))
        tg = (tg * w).div_scalar(float((3 * k) * (3 * k + 1)))
        tq = (tq * w).div_scalar(float((3 * k - 2) * (3 * k)))
        f = f + tf
        g = g + tg
        gp = gp + tq
        big = max(np.max(tf.abs_hi()), np.max(tg.abs_hi()),
                  np.max(tp.abs_hi()), np.max(tq.abs_hi()))
        # 1e-32 of an O(1) result; the loss factor is already in the sum
        if big < 1e-34:
            break
    ai = f.scale(_C1_HI, _C1_LO) + g.scale(-_C2_HI, -_C2_LO)
    aip = fp.scale(_C1_HI, _C1_LO) + gp.scale(-_C2_HI, -_C2_LO)
    return ai.to_complex(), aip.to_complex()


# ---------------------------------------------------------------------------
# asymptotic expansion

def _asymptotic_coefficients(n=60):
    u = np.empty(n)
    u[0] = 1.0
    for k in range(1, n):
        u[k] = u[k - 1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
    v = np.empty(n)
    v[0] = 1.0
    k = np.arange(1, n)
    v[1:] = -(6 * k + 1) / (6 * k - 1) * u[1:]
    return u, v


_U, _V = _asymptotic_coefficients()


def _asymptotic_sector(z):
    """Asymptotic Ai, Ai' for |arg z| <= 2 pi / 3, |z| large.

    Returns the mantissas together with the exponent ``-zeta`` so callers
    can handle over/underflow; Ai = A * exp(-zeta), Ai' = B * exp(-zeta).
    """
    sq = np.sqrt(z)
    zeta = (2.0 / 3.0) * (z * sq)
    z14 = np.sqrt(sq)
    inv = 1.0 / zeta
    sa = np.ones_like(z)
    sb = np.ones_like(z)
    term_a = np.ones_like(z)
    term_b = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    last = np.ones(z.shape)
    pw = np.ones_like(z)
    for k in range(1, len(_U)):
        pw = pw * (-inv)
        term_a = _U[k] * pw
        term_b = _V[k] * pw
        mag = np.abs(term_a)
        # optimal truncation: stop once the terms start growing
        active &= mag < last
        sa = np.where(active, sa + term_a, sa)
        sb = np.where(active, sb + term_b, sb)
        last = np.where(active, mag, last)
        active &= mag > 1e-18
        if not active.any():
            break
    amp = 1.0 / (2.0 * _SQRT_PI)
    return amp * sa / z14, -amp * z14 * sb, -zeta


def _apply_exp(mant, expo):
    """mant * exp(expo) with clean underflow to zero; returns (value, underflow)."""
    logmag = expo.real + np.log(np.maximum(np.abs(mant), 1e-300))
    under = logmag < _UNDERFLOW_LOG
    safe = np.where(under, 0.0, expo)
    val = mant * np.exp(safe)
    return np.where(under, 0.0, val), under


def _asymptotic_negative_axis(x):
    """Ai(-x), Ai'(-x) for real x > 0 in real arithmetic.

    Avoids the rotation identity so the phase (2/3) x**1.5 carries only its
    own rounding error, which dominates for large x.
    """
    xi = (2.0 / 3.0) * (x * np.sqrt(x))
    inv = 1.0 / xi
    # even/odd split of the same optimally truncated series
    pa_even = np.ones_like(x)
    pa_odd = np.zeros_like(x)
    pb_even = np.ones_like(x)
    pb_odd = np.zeros_like(x)
    pw = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    last = np.ones_like(x)
    for k in range(1, len(_U)):
        pw = pw * inv
        # (-1)^j on the j-th even/odd term: sign pattern + - - + + - - ...
        sign = 1.0 if (k // 2) % 2 == 0 else -1.0
        ta = sign * _U[k] * pw
        tb = sign * _V[k] * pw
        mag = np.abs(ta)
        active &= mag < last
        if k % 2 == 0:
            pa_even = np.where(active, pa_even + ta, pa_even)
            pb_even = np.where(active, pb_even + tb, pb_even)
        else:
            pa_odd = np.where(active, pa_odd + ta, pa_odd)
            pb_odd = np.where(active, pb_odd + tb, pb_odd)
        last = np.where(active, mag, last)
        active &= mag > 1e-18
        if not active.any():
            break
    s, c = np.sin(xi), np.cos(xi)
    cq = (c + s) / math.sqrt(2.0)    # cos(xi - pi/4)
    sq = (s - c) / math.sqrt(2.0)    # sin(xi - pi/4)
    x14 = np.sqrt(np.sqrt(x))
    ai = (cq * pa_even + sq * pa_odd) / (_SQRT_PI * x14)
    aip = x14 * (sq * pb_even - cq * pb_odd) / _SQRT_PI
    return ai, aip


def _asymptotic(z):
    """Asymptotic evaluation with the rotation identity outside the sector."""
    ai = np.empty_like(z)
    aip = np.empty_like(z)
    under = np.zeros(z.shape, dtype=bool)
    negreal = (z.imag == 0) & (z.real < 0)
    if negreal.any():
        a, b = _asymptotic_negative_axis(-z.real[negreal])
        ai[negreal], aip[negreal] = a, b
    rest = ~negreal
    if rest.any():
        ai[rest], aip[rest], under[rest] = _asymptotic_offaxis(z[rest])
    return ai, aip, under


def _asymptotic_offaxis(z):
    theta = np.angle(z)
    inner = np.abs(theta) <= 2.0 * np.pi / 3.0
    ai = np.empty_like(z)
    aip = np.empty_like(z)
    under = np.zeros(z.shape, dtype=bool)
    if inner.any():
        a, b, e = _asymptotic_sector(z[inner])
        ai[inner], u1 = _apply_exp(a, e)
        aip[inner], u2 = _apply_exp(b, e)
        under[inner] = u1 & u2
    outer = ~inner
    if outer.any():
        zo = z[outer]
        a1, b1, e1 = _asymptotic_sector(_OMEGA * zo)
        a2, b2, e2 = _asymptotic_sector(_OMEGA2 * zo)
        # both pieces oscillate or grow here; no underflow handling needed
        ai[outer] = -_OMEGA * a1 * np.exp(e1) - _OMEGA2 * a2 * np.exp(e2)
        aip[outer] = -_OMEGA2 * b1 * np.exp(e1) - _OMEGA * b2 * np.exp(e2)
    return ai, aip, under


# ---------------------------------------------------------------------------
# public evaluation

def _cancellation_log(z):
    """Log of (largest series term) / |Ai(z)|, roughly."""
    r = np.abs(z)
    theta = np.abs(np.angle(z))
    return (2.0 / 3.0) * r ** 1.5 * (1.0 + np.cos(1.5 * theta))


def _eval_upper(z):
    ai = np.empty_like(z)
    aip = np.empty_like(z)
    under = np.zeros(z.shape, dtype=bool)
    r = np.abs(z)
    near = r <= SERIES_RADIUS
    if near.any():
        zn = z[near]
        loss = _cancellation_log(zn)
        plain = loss <= _PLAIN_SERIES_LOSS
        a = np.empty_like(zn)
        b = np.empty_like(zn)
        if plain.any():
            a[plain], b[plain] = _series_plain(zn[plain])
        if (~plain).any():
            a[~plain], b[~plain] = _series_dd(zn[~plain])
        ai[near], aip[near] = a, b
    far = ~near
    if far.any():
        ai[far], aip[far], under[far] = _asymptotic(z[far])
    return ai, aip, under


def airy_pair(z, full_output=False):
    """Ai(z) and Ai'(z) for real or complex `z` (scalar or array).

    Parameters
    ----------
    z : complex or array_like
        Evaluation points; must be finite.
    full_output : bool
        If True also return a boolean mask marking points where Ai
        underflowed and was returned as exact zero.

    Returns
    -------
    ai, ai_prime : complex ndarray (or complex scalar)
    underflow : bool ndarray, only if `full_output`
    """
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    zarr = np.atleast_1d(zarr)
    if not np.all(np.isfinite(zarr)):
        raise ValueError("Airy argument must be finite")
    lower = zarr.imag < 0
    zu = np.where(lower, np.conj(zarr), zarr).ravel()
    a, b, u = _eval_upper(zu)
    a = a.reshape(zarr.shape)
    b = b.reshape(zarr.shape)
    u = u.reshape(zarr.shape)
    a = np.where(lower, np.conj(a), a)
    b = np.where(lower, np.conj(b), b)
    real = zarr.imag == 0
    a = np.where(real, a.real + 0j, a)
    b = np.where(real, b.real + 0j, b)
    if scalar:
        a, b, u = a[0], b[0], bool(u[0])
    if full_output:
        return a, b, u
    return a, b


def ai(z, full_output=False):
    """Airy function Ai(z); see :func:`airy_pair`."""
    out = airy_pair(z, full_output=full_output)
    if full_output:
        return out[0], out[2]
    return out[0]


def ai_prime(z, full_output=False):
    """Derivative Ai'(z); see :func:`airy_pair`."""
    out = airy_pair(z, full_output=full_output)
    if full_output:
        return out[1], out[2]
    return out[1]


# ---------------------------------------------------------------------------
# zeros

def airy_zero_seed(k):
    """Leading-order asymptotic location ((3/8) pi (4k - 1))**(2/3) of a_k."""
    k = np.asarray(k, dtype=float)
    return (3.0 / 8.0 * np.pi * (4.0 * k - 1.0)) ** (2.0 / 3.0)


def _newton_zeros(kmax, max_iter=50, tol=1e-13):
    k = np.arange(1, kmax + 1)
    a = airy_zero_seed(k)
    for _ in range(max_iter):
        f, fp = airy_pair(-a)
        step = f.real / fp.real
        a = a + step
        # relative noise floor of the kernel is ~2e-15; polish once past tol
        if np.all(np.abs(step) <= tol * a):
            f, fp = airy_pair(-a)
            a = a + f.real / fp.real
            break
    else:
        raise ConvergenceError("Newton iteration for Airy zeros did not converge")
    if np.any(np.diff(a) <= 0):
        raise ConvergenceError("Airy zeros are not strictly increasing; kernel inaccurate")
    return a


class _ZeroCache:
    """Build-once table of a_1 < a_2 < ... shared by all callers."""

    def __init__(self):
        self._lock = threading.Lock()
        self._values = np.empty(0)

    def get(self, m):
        values = self._values
        if m <= values.size:
            return values[:m]
        if m > MAX_ZEROS:
            raise ValueError(f"at most {MAX_ZEROS} Airy zeros are tabulated, asked for {m}")
        with self._lock:
            if self._values.size < m:
                # grow geometrically so repeated small requests stay cheap
                target = min(MAX_ZEROS, max(m, 2 * self._values.size, 64))
                table = _newton_zeros(target)
                table.setflags(write=False)
                self._values = table
            return self._values[:m]


_ZEROS = _ZeroCache()


def airy_zeros(m):
    """First `m` values a_1 < ... < a_m with Ai(-a_k) = 0 (read-only array)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return np.empty(0)
    return _ZEROS.get(int(m))


def airy_zero(k):
    """The k-th zero magnitude a_k (Ai(-a_k) = 0), k >= 1."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return float(airy_zeros(k)[k - 1])


def ai_hadamard(z, m):
    """m-term truncation of the Hadamard product of Ai.

    ``Ai(0) exp(-nu z) prod_{k<=m} (1 + z/a_k) exp(-z/a_k)``
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    const = airy_constants()
    zarr = np.asarray(z, dtype=complex)
    a = airy_zeros(m)
    out = const.ai0 * np.exp(-const.nu * zarr)
    if m:
        ratio = zarr[..., None] / a
        out = out * np.prod((1.0 + ratio) * np.exp(-ratio), axis=-1)
    if np.isrealobj(z) or np.all(zarr.imag == 0):
        out = out.real
    return out[()] if out.ndim == 0 else out
