import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rotwave.diagnostics import (
    EssResSpec,
    ess_res_split,
    free_energy_distance,
    relative_entropy,
    uniform_bound_monitor,
)
from rotwave.ns import PressureLaw


def test_chi_plateau_and_support():
    spec = EssResSpec(a=0.25)
    rho = np.linspace(0.0, 2.5, 501)
    chi = spec.chi(rho)
    assert np.all(chi[np.abs(rho - 1) <= 0.25] == 1)
    assert np.all(chi[np.abs(rho - 1) >= 0.5] == 0)
    assert np.all((0 <= chi) & (chi <= 1))


def test_split_is_exact_partition():
    spec = EssResSpec()
    rng = np.random.default_rng(0)
    rho = 1.0 + 0.6 * rng.standard_normal(100)
    f = rng.standard_normal(100)
    ess, res = ess_res_split(f, rho, spec)
    assert np.allclose(ess + res, f, atol=1e-15)


def test_invalid_half_width_rejected():
    with pytest.raises(ValueError):
        EssResSpec(a=0.6)


@settings(max_examples=50, deadline=None)
@given(
    gamma=st.floats(1.6, 4.0),
    rho=st.floats(0.05, 5.0),
    r=st.floats(0.05, 5.0),
)
def test_free_energy_distance_nonnegative(gamma, rho, r):
    law = PressureLaw(gamma)
    d = free_energy_distance(np.array([rho]), np.array([r]), law)
    assert d[0] >= -1e-12
    if abs(rho - r) > 1e-6:
        assert d[0] > 0


def test_free_energy_distance_vanishes_on_diagonal():
    law = PressureLaw(2.5)
    r = np.linspace(0.2, 3.0, 20)
    assert np.allclose(free_energy_distance(r, r, law), 0.0, atol=1e-14)


def test_free_energy_small_amplitude_curvature():
    """Near rho = r = 1 the distance approaches H''(1)/2 (rho - 1)^2."""
    law = PressureLaw(1.9)
    h = np.array([1e-4])
    d = free_energy_distance(1.0 + h, np.ones(1), law)
    assert d[0] == pytest.approx(0.5 * law.d2H(1.0) * h[0] ** 2, rel=1e-3)


def test_relative_entropy_at_rest_state_is_energy():
    law = PressureLaw(2.0)
    rng = np.random.default_rng(1)
    shape = (8, 8, 4)
    eps = 0.2
    sigma = 0.1 * rng.standard_normal(shape)
    rho = 1.0 + eps * sigma
    u = 0.1 * rng.standard_normal((3, *shape))
    measure = 8 * np.pi**2
    re = relative_entropy(rho, u, np.ones(shape), np.zeros((3, *shape)), eps, law, measure)
    energy = measure * np.mean(
        0.5 * rho * np.sum(u**2, axis=0)
        + (law.H(rho) - law.dH(1.0) * (rho - 1.0) - law.H(1.0)) / eps**2
    )
    assert re == pytest.approx(energy, rel=1e-13)
    assert re >= 0


def test_relative_entropy_zero_iff_equal():
    law = PressureLaw(2.0)
    shape = (4, 4, 2)
    rho = np.full(shape, 1.3)
    u = np.ones((3, *shape))
    assert relative_entropy(rho, u, rho, u, 0.1, law, 1.0) == pytest.approx(0.0, abs=1e-14)


class _FakeTraj:
    def __init__(self, eps, scale, times=None):
        self.eps = eps
        self.times = np.linspace(0, 1, 11) if times is None else times
        n = len(self.times)
        self.sqrt_rho_u_l2 = np.full(n, scale)
        self.sigma_ess_l2 = np.full(n, scale)
        self.residual_rho = np.full(n, scale * eps**2)
        self.residual_one = np.zeros(n)
        self.dissipation = np.full(n, scale)


def test_monitor_accepts_uniform_sweep():
    trajs = [_FakeTraj(e, 1.0) for e in (0.4, 0.2, 0.1)]
    rep = uniform_bound_monitor(trajs)
    assert rep.ratios_bounded
    assert rep.residual_exponent == pytest.approx(2.0, abs=1e-10)


def test_monitor_flags_blowup():
    trajs = [_FakeTraj(0.4, 1.0), _FakeTraj(0.2, 1.0), _FakeTraj(0.1, 100.0)]
    rep = uniform_bound_monitor(trajs)
    assert not rep.ratios_bounded
    assert rep.notes


def test_monitor_vacuous_residual_below_floor():
    trajs = [_FakeTraj(e, 1e-15) for e in (0.4, 0.2)]
    rep = uniform_bound_monitor(trajs)
    assert np.isinf(rep.residual_exponent)
    assert any("vacuous" in n for n in rep.notes)
