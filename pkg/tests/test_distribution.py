import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from chernoff import distribution as D
from chernoff import gfunc
from chernoff.errors import DomainError

G = gfunc.GParams(2.0 ** -0.5)


def test_density_symmetric_and_peaked(dist1):
    t = np.linspace(-2.5, 2.5, 101)
    f = dist1.pdf(t)
    assert np.allclose(f, f[::-1], rtol=0, atol=1e-15)
    assert np.argmax(f) == 50
    assert dist1.pdf(0.0) == pytest.approx(0.5 * gfunc.g(1.0, 0.0) ** 2, rel=1e-15)


def test_total_mass_and_median(dist1):
    t = np.linspace(-6, 6, 6001)
    assert integrate.simpson(dist1.pdf(t), x=t) == pytest.approx(1.0, abs=1e-10)
    assert dist1.cdf(0.0) == pytest.approx(0.5, abs=1e-14)
    assert dist1.cdf(-10.0) == 0.0
    assert dist1.cdf(10.0) == pytest.approx(1.0, abs=1e-14)


def test_cached_cdf_against_exact(dist1):
    t = np.linspace(-2.9, 2.9, 37)
    assert np.max(np.abs(dist1.cdf(t) - dist1.cdf(t, exact=True))) < 1e-9
    assert np.all(np.diff(dist1.cdf(np.linspace(-4, 4, 500))) >= 0)


@given(p=st.floats(1e-6, 1 - 1e-6))
def test_quantile_roundtrip(dist1, p):
    q = dist1.quantile(p)
    assert dist1.cdf(q, exact=True) == pytest.approx(p, abs=1e-12)


def test_quantile_symmetry_and_bounds(dist1):
    assert dist1.quantile(0.975) == pytest.approx(-dist1.quantile(0.025), abs=1e-12)
    with pytest.raises(ValueError):
        dist1.quantile(1.5)


def test_moments(dist1):
    # variance of Chernoff's distribution, 0.26355964...
    assert dist1.moment(2) == pytest.approx(0.2635596412996, abs=1e-12)
    for k in (1, 3, 5):
        assert abs(dist1.moment(k)) < 1e-14
    t = np.linspace(-6, 6, 12001)
    assert dist1.moment(4) == pytest.approx(integrate.simpson(t ** 4 * dist1.pdf(t), x=t), rel=1e-9)
    with pytest.raises(ValueError):
        dist1.moment(9)


def test_w_constants(dist1):
    assert D.w(dist1, 0.0) == pytest.approx(3.4052, abs=1e-3)
    s0 = D.sigma0(dist1)
    assert s0 == pytest.approx(0.541912, abs=1e-4)
    assert s0 ** 1.5 == pytest.approx(0.398927, abs=1e-4)
    with pytest.raises(DomainError):
        D.sigma0(D.ChernoffDist(2.0))


def test_w_matches_finite_differences(dist1):
    t, h = 0.7, 1e-3
    nl = -dist1.logpdf(np.array([t - h, t, t + h]))
    fd = (nl[0] - 2 * nl[1] + nl[2]) / h ** 2
    assert D.w(dist1, t) == pytest.approx(fd, rel=1e-5)


@pytest.mark.parametrize("c", [0.25, 0.5, 2.0, 4.0])
def test_scaling_law(c):
    t = np.array([-1.0, -0.3, 0.0, 0.7, 1.5])
    assert np.max(np.abs(D.scaling_check(c, t))) <= 1e-7


def test_moment_scaling(dist1):
    m1 = dist1.moment(2)
    for c in (0.5, 2.0):
        assert D.ChernoffDist(c).moment(2) / m1 == pytest.approx(c ** (-4 / 3), rel=1e-5)


def test_pf2_determinants(dist1):
    assert D.pf2_check(dist1, (0.0, 1.0), (0.0, 1.0)) > 0
    assert D.pf2_random_min(dist1, 2000, seed=5) >= -1e-10
    with pytest.raises(ValueError):
        D.pf2_check(dist1, (1.0, 0.0), (0.0, 1.0))


@given(x1=st.floats(-1.5, 1.5), dx=st.floats(0, 1.5), y1=st.floats(-1.5, 1.5), dy=st.floats(0, 1.5))
def test_pf2_property(dist1, x1, dx, y1, dy):
    assert D.pf2_check(dist1, (x1, x1 + dx), (y1, y1 + dy)) >= -1e-12


@pytest.mark.parametrize("x,y", [(0.5, 0.25), (-1.0, 0.75), (3.0, -1.0), (2.0, 1.5)])
def test_correlation_terms_closed_form(x, y):
    # with G = g_{2^-1/2}: I1 and I2 are half-sums, I3 a half-difference of shifted G
    I1, I2, I3 = D.correlation_terms(x, y)
    g0, gm, gp = gfunc.g(G, np.array([x, x - 2 * y, x + 2 * y]))
    k = math.pi / math.sqrt(2)
    assert I1 == pytest.approx(k * (0.5 * g0 - 0.25 * (gm + gp)), abs=1e-10)
    assert I2 == pytest.approx(k * (0.5 * g0 + 0.25 * (gm + gp)), abs=1e-10)
    assert I3 == pytest.approx(k / 4 * (gm - gp), abs=1e-10)
    sq = D.correlation_inequality(x, y, squared_cross_term=True)
    assert sq == pytest.approx(math.pi ** 2 / 8 * (g0 * g0 - gm * gp), abs=1e-10)


def test_correlation_printed_form_changes_sign():
    assert D.correlation_inequality(3.0, -1.0) < -1.0
    ax = np.arange(-3, 3.01, 0.25)
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    assert D.correlation_inequality(X, Y, squared_cross_term=True).min() >= -1e-7


def test_transport_map(dist1):
    z = np.array([-6.0, -1.0, 0.0, 1.0, 6.0])
    T = D.transport_map(dist1, z)
    assert T[2] == pytest.approx(0.0, abs=1e-12)
    assert np.all(np.diff(T) > 0)
    rep = D.transport_map(dist1, z, full_output=True)
    assert rep.clamped.tolist() == [True, False, False, False, True]
    assert rep.contraction_observed
    assert rep.derivative[1] == pytest.approx(1 / (math.sqrt(2 * math.pi) * dist1.pdf(0.0)), rel=1e-5)


def test_profile_summary_schema(dist1):
    grid = np.round(np.arange(-1.0, 1.0001, 0.1), 12)
    rep = D.strong_lc_profile(dist1, grid, pf2_draws=500, corr_step=1.0)
    summ = rep.summary()
    json.dumps(summ)
    assert summ["schema_version"] == 1
    assert summ["w0"] == pytest.approx(3.4052, abs=1e-3)
    assert rep.logconcave_ok and rep.strong_lc_ok
    assert rep.strong_lc_margin >= -1e-6
    assert summ["corr_min"] < 0 <= summ["corr_squared_min"] + 1e-12


def test_hermite_cache_monotone_condition(dist1):
    secant = np.diff(dist1.knot_cdf) / np.diff(dist1.knots)
    assert np.all(dist1.knot_pdf[:-1] / secant <= 3) and np.all(dist1.knot_pdf[1:] / secant <= 3)
