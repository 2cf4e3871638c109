import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from chernoff import airy, gfunc
from chernoff.errors import DomainError, PrecisionError

P1 = gfunc.GParams(1.0)
NU = airy.airy_constants().nu


def mp_g(c, x):
    # independent inversion: mpmath Airy on the imaginary axis, mpmath quadrature
    mp.mp.dps = 20
    s = (2 * c * c) ** (-1 / 3)
    f = lambda u: mp.re(mp.exp(-1j * u * x) / mp.airyai(1j * s * u))
    val = mp.quad(f, mp.linspace(0, 40 * c ** (2 / 3), 41))
    return float((2 / c) ** (1 / 3) / mp.pi * val)


@pytest.mark.parametrize("x", [0.0, 1.0, -2.0])
def test_g_matches_mpmath_inversion(x):
    assert gfunc.g(P1, x) == pytest.approx(mp_g(1.0, x), abs=1e-11)


def test_mass_first_and_second_moments():
    # int g = 2^(1/3)/Ai(0); the normalised law has mean nu 2^(-1/3), variance nu^2 2^(-2/3)
    x = np.linspace(-14.0, 8.0, 4401)
    gx = gfunc.g(P1, x)
    mass = integrate.simpson(gx, x=x)
    assert mass == pytest.approx(gfunc.g_integral(P1), rel=1e-10)
    mean = integrate.simpson(x * gx, x=x) / mass
    var = integrate.simpson(x * x * gx, x=x) / mass - mean ** 2
    assert mean == pytest.approx(NU * 2 ** (-1 / 3), rel=1e-8)
    assert var == pytest.approx(NU ** 2 * 2 ** (-2 / 3), rel=1e-8)


def test_transform_closed_form():
    lam = 0.8
    x = np.linspace(-14.0, 8.0, 4401)
    gx = gfunc.g(P1, x)
    num = integrate.simpson(gx * np.exp(1j * lam * x), x=x)
    closed = gfunc.g_transform(P1, lam)
    assert abs(num - closed) < 1e-9 or abs(num - np.conj(closed)) < 1e-9


def test_left_tail_decay():
    # left tail ~ K exp(a_1 2^(1/3) x); g(-7) ~ 2.5e-9 and strictly decaying
    x = np.arange(-8.0, -3.0, 0.5)
    gx = gfunc.g(P1, x)
    assert gfunc.g(P1, -7.0) < 1e-8
    assert np.all(np.diff(gx) > 0)
    rate = np.diff(np.log(gx)) / 0.5
    assert rate[-1] == pytest.approx(airy.airy_zero(1) * 2 ** (1 / 3), rel=0.05)


def test_right_tail_small():
    assert 0 < gfunc.g(P1, 3.0) < 1e-6
    assert gfunc.g(P1, 5.0) < 1e-12


@pytest.mark.parametrize("order", [1, 2, 3])
def test_derivatives_against_differences(order):
    x, h = 0.4, 1e-3
    lower = np.array([gfunc.g_deriv(P1, x + k * h, order - 1) for k in (-1, 1)])
    fd = (lower[1] - lower[0]) / (2 * h)
    assert gfunc.g_deriv(P1, x, order) == pytest.approx(fd, rel=1e-5, abs=1e-8)


def test_g_derivs_shape_and_consistency():
    x = np.array([[0.0, 0.5], [1.0, -1.0]])
    d = gfunc.g_derivs(P1, x, (0, 2))
    assert d.shape == (2, 2, 2)
    assert d[0, 1, 0] == pytest.approx(gfunc.g(P1, 1.0), abs=1e-14)


def test_v_positive_and_domain_error():
    assert np.all(gfunc.v(P1, np.linspace(-3, 2.5, 23)) > 0)
    with pytest.raises(DomainError):
        gfunc.v(P1, -12.0)


@given(c=st.sampled_from([0.25, 0.5, 2.0, 4.0]), x=st.floats(-1.5, 1.5))
def test_scaling_property(c, x):
    assert abs(gfunc.g_scaling_residual(c, x)) < 1e-10


def test_tail_bound_and_params():
    assert gfunc.tail_bound(1.0, 20.0) > gfunc.tail_bound(1.0, 30.0)
    with pytest.raises(ValueError):
        gfunc.GParams(c=-1.0)
    with pytest.raises(ValueError):
        gfunc.GParams(c=1.0, quad=gfunc.QuadratureConfig(u_max=5.0))
    assert gfunc.GParams(4.0).u_max == pytest.approx(40 * 4 ** (2 / 3))


def test_node_budget_raises():
    tight = gfunc.GParams(1.0, gfunc.QuadratureConfig(nodes=30))
    with pytest.raises(PrecisionError):
        gfunc.g(tight, 0.0)


def test_gtilde_cdf_properties():
    x = np.linspace(-10, 4, 200)
    F = gfunc.gtilde_cdf(P1, x)
    assert np.all(np.diff(F) >= 0)
    assert F[0] < 1e-12 and 1 - F[-1] < 1e-12
    assert gfunc.gtilde_cdf(P1, -100.0) == 0.0 and gfunc.gtilde_cdf(P1, 100.0) == 1.0
    # between knots the Hermite error is h^4 max|F''''|/384 ~ 1e-9 at h = 0.02
    for x0 in (-1.234, 0.3071, 1.9):
        t = np.linspace(-16.0, x0, 16001)
        direct = integrate.simpson(gfunc.g(P1, t), x=t)
        assert gfunc.gtilde_cdf(P1, x0) == pytest.approx(direct / gfunc.g_integral(P1), abs=5e-9)


def test_bad_inputs():
    with pytest.raises(ValueError):
        gfunc.g(P1, math.nan)
    with pytest.raises(ValueError):
        gfunc.g_deriv(P1, 0.0, 5)
