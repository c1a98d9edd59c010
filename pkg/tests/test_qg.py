import numpy as np
import pytest

from rotwave import qg
from rotwave.grid import PlaneGrid, ScalarField
from rotwave.initial import gaussian_vortex, random_band_limited, vortex_dipole
from rotwave.spectral import fft_coeffs, l2_norm


@pytest.fixture
def plane():
    return PlaneGrid(L=2 * np.pi, Nx=64, Ny=64)


def test_helmholtz_roundtrip(plane):
    q = random_band_limited(plane, seed=0, band=(0.5, 6.0))
    back = qg.invert_helmholtz(qg.helmholtz(q))
    assert np.max(np.abs(back.values - q.values)) < 1e-12


def test_radial_vortex_is_steady(plane):
    # wide enough that the 2/3-rule cut sits far in the Gaussian tail
    q = gaussian_vortex(plane, amplitude=1.0, radius=0.8)
    tend = qg.qg_rhs(q)
    assert np.max(np.abs(tend.values)) < 1e-9 * np.max(np.abs(qg.helmholtz(q).values))


def test_advection_term_integrates_to_zero(plane):
    # v . grad P is a perfect divergence, so the tendency has zero mean
    q = vortex_dipole(plane, amplitude=1.0, radius=0.5)
    tend = qg.qg_rhs(q)
    assert abs(np.mean(tend.values)) < 1e-13 * np.max(np.abs(tend.values))


def test_energy_and_enstrophy_conserved(plane):
    q0 = vortex_dipole(plane, amplitude=0.5, radius=0.6, separation=1.2)
    traj = qg.run_qg(q0, T=1.0, dt=0.01)
    assert np.max(np.abs(traj.energy - traj.energy[0])) < 1e-8 * traj.energy[0]
    assert np.max(np.abs(traj.p_l2 - traj.p_l2[0])) < 1e-8 * traj.p_l2[0]


def test_rk4_fourth_order(plane):
    """Halving dt shrinks the one-shot error by about 2^4."""
    q0 = vortex_dipole(plane, amplitude=0.5, radius=0.6)
    T = 0.4

    def final(dt):
        return qg.run_qg(q0, T=T, dt=dt).snapshots[-1]

    ref = final(0.0025)
    err_c = np.max(np.abs(final(0.02) - ref))
    err_f = np.max(np.abs(final(0.01) - ref))
    rate = np.log2(err_c / err_f)
    assert 3.3 < rate < 4.7


def test_cfl_violation_raises(plane):
    q0 = vortex_dipole(plane, amplitude=5.0, radius=0.5)
    with pytest.raises(qg.CFLError):
        qg.run_qg(q0, T=1.0, dt=0.5)


def test_solution_independent_of_snapshot_stride(plane):
    q0 = vortex_dipole(plane, amplitude=0.5, radius=0.6)
    a = qg.run_qg(q0, T=0.5, dt=0.01, snapshot_stride=10)
    b = qg.run_qg(q0, T=0.5, dt=0.01, snapshot_stride=25)
    assert np.array_equal(a.snapshots[-1], b.snapshots[-1])


def test_tail_flag_on_underresolved_run():
    coarse = PlaneGrid(L=2 * np.pi, Nx=16, Ny=16)
    q0 = vortex_dipole(coarse, amplitude=2.0, radius=0.3)
    traj = qg.run_qg(q0, T=2.0, dt=0.005)
    assert traj.under_resolved


def test_stationary_vortex_long_run(plane):
    q0 = gaussian_vortex(plane, amplitude=1.0, radius=0.8)
    traj = qg.run_qg(q0, T=2.0, dt=0.01)
    drift = np.max(np.abs(traj.snapshots[-1] - q0.values))
    assert drift < 1e-8 * np.max(np.abs(q0.values))
