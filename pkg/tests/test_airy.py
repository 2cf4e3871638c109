import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chernoff import airy

mp.mp.dps = 40


def mp_pair(z):
    z = mp.mpc(z.real, z.imag)
    return complex(mp.airyai(z)), complex(mp.airyai(z, derivative=1))


def envelope(z):
    # |Ai| scale away from the zeros on the negative axis
    r = abs(z)
    zeta = (2.0 / 3.0) * r ** 1.5
    decay = -zeta * math.cos(1.5 * np.angle(z)) if r > 1 else 0.0
    return math.exp(min(decay, 700.0)) * max(r, 1.0) ** 0.25 + 1e-300


def test_constants_closed_form():
    k = airy.airy_constants()
    assert k.ai0 == pytest.approx(float(mp.airyai(0)), rel=1e-15)
    assert k.ai_prime0 == pytest.approx(float(mp.airyai(0, derivative=1)), rel=1e-15)
    assert k.nu == pytest.approx(-k.ai_prime0 / k.ai0, rel=1e-15)


def test_constants_printed_values():
    k = airy.airy_constants()
    assert abs(k.ai0 - 0.35503) < 1e-5
    assert abs(k.ai_prime0 + 0.25882) < 1e-5
    assert abs(k.nu - 0.729011) < 1e-5


@pytest.mark.parametrize("z", [0.5, -2.5, 3 + 4j, 1j * 7.0, -9 + 0.5j, 12 * np.exp(2.5j), 20j, -25.0])
def test_pair_matches_mpmath(z):
    z = complex(z)
    a, ap = airy.airy_pair(np.array([z]))
    ra, rap = mp_pair(z)
    env = envelope(z)
    assert abs(a[0] - ra) <= 2e-13 * env
    assert abs(ap[0] - rap) <= 2e-13 * env * max(abs(z), 1.0) ** 0.5


@given(r=st.floats(0.0, 30.0), theta=st.floats(-math.pi, math.pi))
def test_random_points_match_mpmath(r, theta):
    z = r * complex(math.cos(theta), math.sin(theta))
    a = airy.ai(np.array([z]))[0]
    assert abs(a - mp_pair(z)[0]) <= 5e-13 * envelope(z)


@given(x=st.floats(-20, 20), y=st.floats(0.0, 20))
def test_conjugate_symmetry(x, y):
    z = np.array([complex(x, y), complex(x, -y)])
    a, ap = airy.airy_pair(z)
    assert a[1] == np.conj(a[0])
    assert ap[1] == np.conj(ap[0])


def test_real_input_real_output():
    a = airy.ai(np.linspace(-10, 5, 31))
    assert np.all(a.imag == 0)


def test_airy_ode():
    # Ai'' = z Ai, with Ai'' taken by central differences of Ai'
    z = np.array([0.3 + 0.2j, -4.0 + 1j, 2j * 5])
    h = 1e-5
    d2 = (airy.ai_prime(z + h) - airy.ai_prime(z - h)) / (2 * h)
    assert np.allclose(d2, z * airy.ai(z), rtol=1e-7, atol=1e-9)


def test_underflow_flag():
    a, flag = airy.ai(np.array([200.0, 1.0]), full_output=True)
    assert flag[0] and not flag[1]
    assert a[0] == 0


def test_zeros_match_mpmath():
    a = airy.airy_zeros(60)
    for k in (1, 2, 10, 60):
        assert a[k - 1] == pytest.approx(-float(mp.airyaizero(k)), rel=1e-14)


def test_zeros_are_roots_and_increasing():
    a = airy.airy_zeros(2000)
    assert np.all(np.diff(a) > 0)
    assert np.max(np.abs(airy.ai(-a))) < 1e-12


def test_zero_seed_asymptotic():
    assert airy.airy_zero(50) / airy.airy_zero_seed(50) - 1 == pytest.approx(0.0, abs=1e-5)


def test_zero_limits():
    with pytest.raises(ValueError):
        airy.airy_zeros(airy.MAX_ZEROS + 1)
    with pytest.raises(ValueError):
        airy.airy_zero(0)


def test_inverse_square_sum_tends_to_nu_squared():
    nu2 = airy.airy_constants().nu ** 2
    a = airy.airy_zeros(2000)
    partial = np.cumsum(1.0 / a ** 2)
    assert np.all(partial < nu2)
    # tail ~ 3 (3 pi / 2)^(-4/3) m^(-1/3)
    m = 2000
    tail = 3 * (1.5 * math.pi) ** (-4 / 3) * (m + 0.25) ** (-1 / 3)
    assert nu2 - partial[-1] == pytest.approx(tail, rel=1e-3)


def test_hadamard_exact_at_zero_and_improves():
    assert airy.ai_hadamard(0.0, 25) == pytest.approx(airy.airy_constants().ai0, rel=1e-15)
    x = np.linspace(-12, 2, 701)
    exact = airy.ai(x).real
    gaps = [np.max(np.abs(airy.ai_hadamard(x, m) - exact)) for m in (25, 125, 500)]
    assert gaps[0] > gaps[1] > gaps[2]


def test_zeros_match_scipy_table():
    from scipy import special
    ref = -special.ai_zeros(500)[0]
    # scipy's table is itself off by ~1e-12 at k = 5 (mpmath sides with ours there)
    assert np.allclose(airy.airy_zeros(500), ref, rtol=2e-12, atol=0)


@pytest.mark.parametrize("x", [-7.3, 0.4, 6.0])
def test_real_axis_matches_scipy(x):
    from scipy import special
    ref, refp, _, _ = special.airy(x)
    a, ap = airy.airy_pair(np.array([x]))
    assert a[0].real == pytest.approx(ref, rel=1e-12, abs=1e-15)
    assert ap[0].real == pytest.approx(refp, rel=1e-12, abs=1e-15)
