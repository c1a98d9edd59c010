import numpy as np
import pytest

from rotwave.cutoffs import CutoffSpec, smoothstep
from rotwave.grid import PlaneGrid, ScalarField, make_grid
from rotwave.spectral import fft_coeffs, forward_transform, inverse_transform
from rotwave.cutoffs import apply_frequency_cutoff, apply_spatial_cutoff


def test_smoothstep_range_and_plateaus():
    t = np.linspace(-1, 2, 301)
    s = smoothstep(t)
    assert np.all((0 <= s) & (s <= 1))
    assert np.all(s[t <= 0] == 0)
    assert np.all(s[t >= 1] == 1)


def test_smoothstep_is_smooth_at_the_seams():
    # all one-sided difference quotients stay bounded near t = 0 and t = 1
    for t0 in (0.0, 1.0):
        h = np.logspace(-6, -2, 20)
        dq = (smoothstep(t0 + h) - smoothstep(t0 - h)) / (2 * h)
        assert np.all(np.abs(dq) < 10)


def test_psi_bands():
    c = CutoffSpec.from_delta(0.1)
    r = np.linspace(0, 12, 400)
    psi = c.psi(r)
    inner = (r >= c.a1) & (r <= c.b1)
    outer = (r <= c.a / 2) | (r >= 2 * c.b)
    assert np.all(psi[inner] == 1)
    assert np.all(psi[outer] == 0)
    assert np.all((0 <= psi) & (psi <= 1))


def test_from_delta_ordering():
    for delta in (0.3, 0.1, 0.02):
        c = CutoffSpec.from_delta(delta)
        assert 0 < c.a < c.a1 < c.b1 < c.b
        assert c.K >= 1


def test_invalid_spec_rejected():
    with pytest.raises(ValueError):
        CutoffSpec(a=0.5, a1=0.4, b1=1.0, b=2.0, R=1.0, w=0.5, K=1)


def test_frequency_cutoff_is_a_projection_on_the_plateau():
    grid = make_grid(np.pi, 32, 32, 8)
    c = CutoffSpec(a=0.5, a1=1.0, b1=4.0, b=6.0, R=10.0, w=3.0, K=2)
    rng = np.random.default_rng(0)
    f = ScalarField(grid, rng.standard_normal(grid.shape))
    once = apply_frequency_cutoff(forward_transform(f), c)
    twice = apply_frequency_cutoff(once, c)
    # applying the multiplier twice only shrinks the taper region
    assert np.all(np.abs(twice.coeffs) <= np.abs(once.coeffs) + 1e-15)
    # vertical modes beyond K are annihilated
    n_index = np.abs(np.rint(np.fft.fftfreq(grid.Nz) * grid.Nz).astype(int))
    assert np.max(np.abs(once.coeffs[:, :, n_index > c.K])) == 0


def test_spatial_cutoff_preserves_the_core():
    grid = PlaneGrid(L=8.0, Nx=64, Ny=64)
    c = CutoffSpec(a=0.1, a1=0.2, b1=1.0, b=2.0, R=3.0, w=1.0, K=1)
    f = ScalarField(grid, np.ones(grid.shape))
    cut = apply_spatial_cutoff(f, c)
    X, Y = grid.meshgrid()
    core = np.maximum(np.abs(X), np.abs(Y)) <= c.R - c.w
    outside = np.maximum(np.abs(X), np.abs(Y)) >= c.R + c.w
    assert np.allclose(cut.values[core], 1.0)
    assert np.allclose(cut.values[outside], 0.0)


def test_mollified_field_is_band_limited():
    from rotwave.kernel import mollify

    grid = make_grid(np.pi, 32, 32, 8)
    c = CutoffSpec(a=0.5, a1=1.0, b1=4.0, b=6.0, R=10.0, w=3.0, K=2)
    rng = np.random.default_rng(1)
    f = ScalarField(grid, rng.standard_normal(grid.shape))
    m = mollify(f, c)
    coeffs = fft_coeffs(m.values, grid)
    r = np.sqrt(grid.xi_sq)
    dead = np.broadcast_to(r > 2 * c.b, grid.shape)
    assert np.max(np.abs(coeffs[dead])) < 1e-12
