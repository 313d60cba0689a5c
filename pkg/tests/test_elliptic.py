import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from lamelattice.elliptic import DivergenceError, agm, complete_K, jacobi

moduli = st.floats(0.0, 1.0)
args = st.floats(-50.0, 50.0, allow_nan=False)


def test_K_known_values():
    assert complete_K(0.0) == pytest.approx(math.pi / 2, abs=1e-15)
    # K(1/2) = Gamma(1/4)^2 / (4 sqrt(pi))
    assert complete_K(0.5) == pytest.approx(math.gamma(0.25) ** 2 / (4 * math.sqrt(math.pi)), abs=1e-14)


def test_K_against_quadrature():
    quad, _ = integrate.quad(lambda t: 1 / math.sqrt(1 - 0.5 * math.sin(t) ** 2), 0, math.pi / 2,
                             epsabs=1e-14, epsrel=1e-14, limit=200)
    assert abs(complete_K(0.5) - quad) < 1e-12


@pytest.mark.parametrize("m", [0.01, 0.3, 0.5, 0.9, 0.999, 1 - 1e-9])
def test_K_against_mpmath(m):
    assert complete_K(m) == pytest.approx(float(mpmath.ellipk(m)), rel=1e-14)


def test_K_domain():
    with pytest.raises(DivergenceError):
        complete_K(1.0)
    with pytest.raises(ValueError):
        complete_K(-0.1)
    with pytest.raises(ValueError):
        complete_K(1.5)


def test_agm_symmetric():
    assert agm(1.0, 2.0) == pytest.approx(agm(2.0, 1.0), rel=1e-15)
    assert agm(3.0, 3.0) == 3.0


def test_against_scipy_random():
    rng = np.random.default_rng(7)
    x = rng.uniform(-30, 30, 2000)
    for m in (0.0, 0.1, 0.5, 0.77, 0.99, 1.0):
        sn, cn, dn = jacobi(x, m)
        ref = special.ellipj(x, m)
        for got, want in zip((sn, cn, dn), ref[:3]):
            assert np.max(np.abs(got - want)) < 1e-12


def test_pythagorean_identities_bulk():
    rng = np.random.default_rng(11)
    x = rng.uniform(-20, 20, 10_000)
    m = rng.uniform(0, 1, 10_000)
    sn, cn, dn = jacobi(x, m)
    assert np.max(np.abs(sn ** 2 + cn ** 2 - 1)) < 1e-12
    assert np.max(np.abs(dn ** 2 + m * sn ** 2 - 1)) < 1e-12


@given(args, moduli)
def test_identities_property(x, m):
    sn, cn, dn = jacobi(x, m)
    assert abs(sn * sn + cn * cn - 1) < 1e-12
    assert abs(dn * dn + m * sn * sn - 1) < 1e-12


@given(args, st.floats(0.0, 0.999))
def test_periodicity(x, m):
    K = complete_K(m)
    sn, cn, dn = jacobi(x, m)
    sn4, cn4, _ = jacobi(x + 4 * K, m)
    _, _, dn2 = jacobi(x + 2 * K, m)
    assert abs(sn4 - sn) < 1e-10 and abs(cn4 - cn) < 1e-10
    assert abs(dn2 - dn) < 1e-10


@given(args, moduli)
def test_parity(x, m):
    a = jacobi(x, m)
    b = jacobi(-x, m)
    assert b.sn == pytest.approx(-a.sn, abs=1e-14)
    assert b.cn == pytest.approx(a.cn, abs=1e-14)
    assert b.dn == pytest.approx(a.dn, abs=1e-14)


def test_quarter_period_values():
    for m in (0.2, 0.5, 0.9):
        sn, cn, dn = jacobi(complete_K(m), m)
        assert abs(sn - 1) < 1e-14 and abs(cn) < 1e-14
        assert abs(dn - math.sqrt(1 - m)) < 1e-14


def test_limits_trig_and_hyperbolic():
    x = np.linspace(-10, 10, 1001)
    sn, cn, dn = jacobi(x, 0.0)
    assert np.max(np.abs(sn - np.sin(x))) < 1e-13
    assert np.max(np.abs(cn - np.cos(x))) < 1e-13
    assert np.max(np.abs(dn - 1)) < 1e-13
    sn, cn, dn = jacobi(x, 1.0)
    assert np.max(np.abs(sn - np.tanh(x))) < 1e-13
    assert np.max(np.abs(cn - 1 / np.cosh(x))) < 1e-13
    assert np.max(np.abs(dn - 1 / np.cosh(x))) < 1e-13


def test_near_limits_continuous():
    x = np.linspace(-3, 3, 101)
    sn, cn, _ = jacobi(x, 1e-12)
    assert np.max(np.abs(sn - np.sin(x))) < 1e-10
    sn, _, dn = jacobi(x, 1 - 1e-12)
    assert np.max(np.abs(sn - np.tanh(x))) < 1e-9


def test_scalar_in_scalar_out():
    out = jacobi(0.3, 0.5)
    assert all(isinstance(v, float) for v in out)
    assert jacobi(0.0, 0.5) == (0.0, 1.0, 1.0)


def test_broadcast_over_modulus():
    x = np.array([0.1, 0.2, 0.3])
    m = np.array([0.1, 0.5, 0.9])
    sn, _, _ = jacobi(x, m)
    assert sn.shape == (3,)
    for i in range(3):
        assert sn[i] == pytest.approx(jacobi(x[i], m[i]).sn, abs=1e-16)


def test_bad_modulus():
    with pytest.raises(ValueError):
        jacobi(0.5, 1.2)
