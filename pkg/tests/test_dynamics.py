import numpy as np
import pytest
from scipy.linalg import expm

from lamelattice.dynamics import (Boundary, EvolveConfig, IntegrationError, LatticeState,
                                  Trajectory, evolve, exact_trajectory, extract_frequency, rhs)
from lamelattice.models import ALParams, SalernoParams, derive_frequencies, stationary_pair
from lamelattice.profiles import Family, commensurate_beta

AL = ALParams(-1.0, -1.0)
L = 32


def ring_pair(params, N=3, m=0.5, c2=0.0, family=Family.DN):
    beta = commensurate_beta(family, N, m, L)
    return stationary_pair(params, family, N, beta, c2, m, L, origin=0)


def test_zero_state_is_fixed_point():
    s = LatticeState(np.zeros(8), np.zeros(8))
    du, dv = rhs(AL, s)
    assert not du.any() and not dv.any()
    traj = evolve(AL, s, EvolveConfig(dt=0.01, t_end=1.0))
    assert np.max(np.abs(traj.u)) == 0.0 and np.max(np.abs(traj.v)) == 0.0


@pytest.mark.parametrize("params", [AL, SalernoParams(-1.0, -2.0, -1.5, 0.7)])
def test_rhs_on_exact_profile_is_pure_rotation(params):
    pair = ring_pair(params)
    fr = derive_frequencies(params, pair, "periodic")
    du, dv = rhs(params, LatticeState.from_pair(pair))
    assert np.max(np.abs(du - (-1j * fr.omega1) * pair.f)) < 1e-12
    assert np.max(np.abs(dv - (-1j * fr.omega2) * pair.g)) < 1e-12


def test_linear_limit_single_site():
    # amplitudes of 1e-8 make the cubic terms ~1e-24: the dynamics are the discrete Laplacian
    n = 16
    u0 = np.zeros(n, complex)
    u0[n // 2] = 1e-8
    cfg = EvolveConfig(dt=1e-3, t_end=2.0)
    traj = evolve(AL, LatticeState(u0, np.zeros(n)), cfg)
    lap = -2 * np.eye(n) + np.roll(np.eye(n), 1, axis=0) + np.roll(np.eye(n), -1, axis=0)
    exact = expm(1j * lap * 2.0) @ u0
    assert np.max(np.abs(traj.u[-1] - exact)) / 1e-8 < 1e-10


def test_open_boundary_linear_limit():
    n = 10
    u0 = np.zeros(n, complex)
    u0[0] = 1e-8
    traj = evolve(AL, LatticeState(u0, np.zeros(n)), EvolveConfig(dt=1e-3, t_end=1.0, boundary="open"))
    lap = -2 * np.eye(n) + np.eye(n, k=1) + np.eye(n, k=-1)
    exact = expm(1j * lap) @ u0
    assert np.max(np.abs(traj.u[-1] - exact)) / 1e-8 < 1e-10


def test_exact_profile_keeps_modulus():
    pair = ring_pair(AL)
    traj = evolve(AL, LatticeState.from_pair(pair), EvolveConfig(dt=1e-2, t_end=3.0, stride=10))
    assert traj.modulus_drift() < 1e-8


def test_perturbed_profile_drifts():
    pair = ring_pair(AL)
    u = pair.f * (1 + 1e-3 * np.random.default_rng(1).normal(size=L))
    traj = evolve(AL, LatticeState(u, pair.g), EvolveConfig(dt=1e-2, t_end=3.0, stride=10))
    assert traj.modulus_drift() > 1e-6


def test_fourth_order_convergence():
    p = SalernoParams(-1.0, -2.0, -1.5, 0.7)
    pair = ring_pair(p)
    fr = derive_frequencies(p, pair, "periodic")
    dts = [0.2, 0.1, 0.05, 0.02]
    errs = []
    for dt in dts:
        traj = evolve(p, LatticeState.from_pair(pair), EvolveConfig(dt=dt, t_end=2.0, stride=10 ** 6))
        ex = exact_trajectory(pair, fr.omega1, fr.omega2, traj.t[-1:])
        errs.append(max(np.max(np.abs(traj.u[-1] - ex.u[0])), np.max(np.abs(traj.v[-1] - ex.v[0]))))
    ratio = errs[0] / errs[1]
    assert 12 < ratio < 20
    slope = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    assert 3.7 < slope < 4.3


def test_translation_invariance():
    pair0 = ring_pair(AL, c2=0.0)
    pair3 = ring_pair(AL, c2=3.0)
    cfg = EvolveConfig(dt=1e-2, t_end=1.0, stride=20)
    a = evolve(AL, LatticeState.from_pair(pair0), cfg)
    b = evolve(AL, LatticeState.from_pair(pair3), cfg)
    assert np.max(np.abs(b.u - np.roll(a.u, -3, axis=1))) < 1e-10
    assert np.max(np.abs(b.v - np.roll(a.v, -3, axis=1))) < 1e-10


def test_frequency_extraction():
    p = SalernoParams(-1.0, -1.0, -2.0, 0.4)
    pair = ring_pair(p)
    traj = evolve(p, LatticeState.from_pair(pair), EvolveConfig(dt=1e-2, t_end=3.0, stride=5))
    j = int(np.argmax(np.minimum(np.abs(pair.f), np.abs(pair.g))))
    est = extract_frequency(traj, j)
    assert abs(est.omega1 - 2.0) < 1e-6
    assert max(est.fit_residual1, est.fit_residual2) < 1e-8


def test_frequency_unwraps_fast_rotation():
    t = np.linspace(0, 5, 400)
    traj = exact_trajectory(ring_pair(AL), 9.0, -7.0, t)
    est = extract_frequency(traj, 5)
    assert est.omega1 == pytest.approx(9.0, abs=1e-10)
    assert est.omega2 == pytest.approx(-7.0, abs=1e-10)


def test_frequency_needs_modulus():
    traj = evolve(AL, LatticeState(np.zeros(5), np.zeros(5)), EvolveConfig(dt=0.1, t_end=0.5))
    with pytest.raises(ValueError, match="too small"):
        extract_frequency(traj, 2)


def test_divergence_reports_time():
    pair = ring_pair(AL)
    with pytest.raises(IntegrationError) as info:
        evolve(AL, LatticeState.from_pair(pair), EvolveConfig(dt=5.0, t_end=5000.0))
    assert info.value.t > 0


def test_determinism():
    pair = ring_pair(AL)
    cfg = EvolveConfig(dt=0.05, t_end=1.0)
    a = evolve(AL, LatticeState.from_pair(pair), cfg)
    b = evolve(AL, LatticeState.from_pair(pair), cfg)
    assert np.array_equal(a.u, b.u) and np.array_equal(a.v, b.v)


def test_stride_records_final_state():
    traj = evolve(AL, LatticeState.from_pair(ring_pair(AL)), EvolveConfig(dt=0.1, t_end=1.05, stride=4))
    assert traj.t[-1] == pytest.approx(1.0, abs=1e-12) or traj.t[-1] == pytest.approx(1.1, abs=1e-12)
    assert list(np.round(traj.t[:3], 12)) == [0.0, 0.4, 0.8]


def test_config_and_state_validation():
    with pytest.raises(ValueError):
        EvolveConfig(dt=0.0)
    with pytest.raises(ValueError):
        EvolveConfig(stride=0)
    with pytest.raises(ValueError):
        EvolveConfig(boundary="twisted")
    with pytest.raises(ValueError):
        LatticeState(np.zeros(2), np.zeros(2))
    with pytest.raises(TypeError):
        rhs(object(), LatticeState(np.zeros(3), np.zeros(3)))
    assert EvolveConfig(boundary="open").boundary is Boundary.OPEN


def test_csv_export():
    traj = Trajectory(np.array([0.0]), np.array([[1 + 1j, 0, 0]]), np.array([[0, 1, 0]], dtype=complex))
    lines = traj.to_csv().split("\r\n")
    assert lines[0] == "t,j,re_u,im_u,abs_u,arg_u,re_v,im_v,abs_v,arg_v"
    assert len(lines) == 5
