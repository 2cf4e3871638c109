import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats

from chernoff import airy, gfunc, hypoexp
from chernoff.errors import IllConditionedError

NU = airy.airy_constants().nu


def conv_oracle(rates, t):
    # nested scipy quadrature of the convolution integral, independent of the closed form
    def dens(r, x):
        if x < 0:
            return 0.0
        if len(r) == 1:
            return r[0] * math.exp(-r[0] * x)
        lam = r[-1]
        return integrate.quad(lambda s: dens(r[:-1], s) * lam * math.exp(-lam * (x - s)),
                              0.0, x, epsabs=1e-13, epsrel=1e-12)[0]
    return dens(list(rates), t)


def test_single_exponential():
    assert hypoexp.harrison_pdf([2.0], 0.5) == pytest.approx(2 * math.exp(-1), rel=1e-15)
    assert hypoexp.harrison_pdf([2.0], -1.0) == 0.0


def test_two_rates_hand_convolution():
    t = np.linspace(0, 10, 201)
    exact = 2 * (np.exp(-t) - np.exp(-2 * t))
    assert np.max(np.abs(hypoexp.harrison_pdf([1.0, 2.0], t) - exact)) <= 1e-12


@pytest.mark.parametrize("rates", [(0.7, 1.3, 2.9), (0.5, 1.1, 1.9, 3.2)])
def test_matches_nested_quadrature(rates):
    for t in (0.3, 1.7, 4.0):
        assert hypoexp.harrison_pdf(rates, t) == pytest.approx(conv_oracle(rates, t), abs=1e-10)


@pytest.mark.parametrize("rates", [(0.7, 1.3, 2.9), (0.5, 1.1, 1.9, 3.2), (1.0, 2.0)])
def test_matches_grid_convolution(rates):
    from chernoff.verify import grid_convolution_pdf
    t = np.linspace(0, 12, 121)
    assert np.max(np.abs(hypoexp.harrison_pdf(rates, t) - grid_convolution_pdf(rates, t))) <= 1e-6


@given(st.lists(st.floats(0.2, 5.0), min_size=1, max_size=6, unique=True))
def test_integrates_to_one(rates):
    rates = sorted(rates)
    if len(rates) > 1 and np.min(np.diff(rates)) < 0.05:
        return
    mass = integrate.quad(lambda t: hypoexp.harrison_pdf(rates, t), 0, np.inf,
                          epsabs=1e-12, epsrel=1e-12, limit=200)[0]
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_coincident_rates_rejected():
    with pytest.raises(IllConditionedError):
        hypoexp.HypoExpRates([1.0, 1.0 + 1e-12])
    with pytest.raises(ValueError):
        hypoexp.HypoExpRates([1.0, -2.0])


def test_derivatives_against_differences():
    r = (0.7, 1.3, 2.9)
    t, h = 1.1, 1e-5
    f = lambda x: hypoexp.harrison_derivs(r, x, 0)
    assert hypoexp.harrison_derivs(r, t, 1) == pytest.approx((f(t + h) - f(t - h)) / (2 * h), rel=1e-8)


def test_vm_convexity_two_rates():
    grid = np.round(np.arange(0.1, 5.0001, 0.01), 12)
    probe = hypoexp.vm_convexity_probe([1.0, 2.0], grid)
    assert probe.asserted and probe.convex
    # closed form v_2 = 1 / (4 sinh^2(t/2))
    assert np.allclose(probe.v, 1 / (4 * np.sinh(grid / 2) ** 2), rtol=1e-10)


def test_vm_single_rate_is_zero():
    probe = hypoexp.vm_convexity_probe([3.0], np.linspace(0.1, 2, 20))
    assert np.max(np.abs(probe.v)) < 1e-12


def test_vm_three_rates_reports_only():
    probe = hypoexp.vm_convexity_probe([1.0, 2.0, 3.0], np.linspace(0.1, 5, 100))
    assert not probe.asserted
    assert probe.second_diff.size == 98


def test_gtilde_representation():
    rep = hypoexp.GTildeRep.from_c(1.0, 400)
    assert np.all(np.diff(rep.b) < 0) and np.all(rep.b > 0)
    assert rep.delta == pytest.approx(-2 ** (-1 / 3) * NU)
    assert rep.tail_variance == pytest.approx(rep.tail_variance_asymptotic, rel=1e-3)
    assert rep.variance == pytest.approx(NU ** 2 * 2 ** (-2 / 3), rel=1e-14)


def test_gtilde_empty_sum():
    rep = hypoexp.GTildeRep.from_c(1.0, 0)
    y = hypoexp.sample_gtilde(rep, 5, gaussian_tail=False)
    assert np.all(y == -rep.delta)


def test_gtilde_moments():
    rep = hypoexp.GTildeRep.from_c(2.0, 200)
    n = 40000
    y = hypoexp.sample_gtilde(rep, n, seed=9, gaussian_tail=False)
    se = math.sqrt(np.sum(rep.b ** 2) / n)
    assert abs(y.mean() + rep.delta) < 3 * se
    var_se = np.sum(rep.b ** 2) * math.sqrt(2.0 / n) * 1.5
    assert abs(y.var() - np.sum(rep.b ** 2)) < 3 * var_se


def test_gtilde_tail_compensation_matters():
    rep = hypoexp.GTildeRep.from_c(1.0, 400)
    P = gfunc.GParams(1.0)
    n = 100_000
    crit = stats.kstwo.ppf(0.99, n)
    with_tail = stats.kstest(hypoexp.sample_gtilde(rep, n, seed=4), lambda x: gfunc.gtilde_cdf(P, x))
    bare = stats.kstest(hypoexp.sample_gtilde(rep, n, seed=4, gaussian_tail=False),
                        lambda x: gfunc.gtilde_cdf(P, x))
    assert with_tail.statistic < 1.5 * crit < bare.statistic


def test_determinism_and_thread_independence(monkeypatch):
    rep = hypoexp.GTildeRep.from_c(1.0, 50)
    monkeypatch.setenv("CHERNOFF_THREADS", "1")
    a = hypoexp.sample_gtilde(rep, 5000, seed=hypoexp.RngSeed(17, 2), chunk=700)
    monkeypatch.setenv("CHERNOFF_THREADS", "4")
    b = hypoexp.sample_gtilde(rep, 5000, seed=hypoexp.RngSeed(17, 2), chunk=700)
    assert np.array_equal(a, b)
    c = hypoexp.sample_gtilde(rep, 5000, seed=hypoexp.RngSeed(17, 3), chunk=700)
    assert not np.array_equal(a, c)


def test_hypoexp_sampler():
    x = hypoexp.sample_hypoexp([1.0, 2.0], 20000, seed=1)
    cdf = lambda t: 1 - 2 * np.exp(-t) + np.exp(-2 * t)
    assert stats.kstest(x, cdf).pvalue > 0.001


def test_chernoff_sampler(dist1):
    n = 100_000
    z, info = hypoexp.sample_chernoff(dist1, n, seed=3, full_output=True)
    assert info.acceptance_rate > 0.95
    sd = math.sqrt(dist1.moment(2))
    assert abs(z.mean()) < 3 * sd / math.sqrt(n)
    m4 = dist1.moment(4)
    assert abs(z.var() - dist1.moment(2)) < 3 * math.sqrt((m4 - dist1.moment(2) ** 2) / n)
    assert stats.kstest(z, dist1.cdf).statistic <= stats.kstwo.ppf(0.99, n)
    again = hypoexp.sample_chernoff(dist1, 1000, seed=3)
    assert np.array_equal(again, z[:1000])


def test_last_argmax_ties():
    t = np.array([0.1, 0.2, 0.3])
    right = np.array([[1.0, 1.0, 0.5], [-1.0, -1.0, -1.0], [-1.0, -2, -3], [0.0, -1, -1]])
    left = np.array([[1.0, 0.0, 0.0], [0.5, 0.5, -1.0], [-1.0, -1, -1], [-1.0, -1, -1]])
    # right ties go to the later point; an equal left max loses; equal 0 beats the left side
    assert hypoexp.last_argmax(left, right, t).tolist() == [0.2, -0.1, 0.0, 0.1]


def test_argmax_symmetry_and_large_c():
    z = hypoexp.simulate_argmax(50.0, None, 1e-4, 2000, seed=1)
    assert z.std() < 0.1
    z1 = hypoexp.simulate_argmax(1.0, 3.0, 2e-3, 20000, seed=2)
    assert abs(z1.mean()) <= 3 * z1.std() / math.sqrt(z1.size)


def test_argmax_variance_scaling():
    n = 20000
    v1 = hypoexp.simulate_argmax(1.0, 3.0, 1e-3, n, seed=5).var()
    v8 = hypoexp.simulate_argmax(8.0, 0.75, 2.5e-4, n, seed=6).var()
    assert v1 / v8 == pytest.approx(8 ** (4 / 3), rel=0.1)


def test_argmax_boundary_warning():
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always")
        hypoexp.simulate_argmax(1.0, 0.2, 1e-2, 200, seed=1)
    assert any("boundary" in str(w.message) for w in rec)


def test_argmax_deterministic():
    a = hypoexp.simulate_argmax(1.0, 3.0, 1e-2, 1200, seed=8, chunk=500)
    b = hypoexp.simulate_argmax(1.0, 3.0, 1e-2, 1200, seed=8, chunk=500)
    assert np.array_equal(a, b)
