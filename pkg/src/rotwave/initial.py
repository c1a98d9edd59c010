"""
Initial-condition presets: Gaussian monopole, dipole pair, and seeded
band-limited random fields, on both the horizontal plane and the slab.
"""

from __future__ import annotations

import numpy as np

from .grid import EVEN, ODD, PlaneGrid, ScalarField, SlabGrid, VectorField
from .spectral import fft_coeffs, ifft_values


def _wrapped_gauss(grid: PlaneGrid, amplitude: float, radius: float, center) -> np.ndarray:
    """Periodized Gaussian; images beyond the nearest are negligible for radius << L."""
    X, Y = grid.meshgrid()
    out = np.zeros(grid.shape)
    for sx in (-2 * grid.L, 0.0, 2 * grid.L):
        for sy in (-2 * grid.L, 0.0, 2 * grid.L):
            r2 = (X - center[0] + sx) ** 2 + (Y - center[1] + sy) ** 2
            out += amplitude * np.exp(-r2 / (2.0 * radius**2))
    return out


def gaussian_vortex(
    grid: PlaneGrid, amplitude: float = 1.0, radius: float = 0.5, center=(0.0, 0.0)
) -> ScalarField:
    """Radially symmetric stream function; an exact steady state of the QG flow."""
    return ScalarField(grid, _wrapped_gauss(grid, amplitude, radius, center))


def vortex_dipole(
    grid: PlaneGrid,
    amplitude: float = 1.0,
    radius: float = 0.5,
    separation: float = 1.5,
) -> ScalarField:
    """Counter-rotating Gaussian pair separated along x; genuinely nonlinear."""
    vals = _wrapped_gauss(grid, amplitude, radius, (-separation / 2, 0.0))
    vals -= _wrapped_gauss(grid, amplitude, radius, (separation / 2, 0.0))
    return ScalarField(grid, vals)


def random_band_limited(
    grid: PlaneGrid,
    seed: int,
    amplitude: float = 1.0,
    band: tuple[float, float] = (0.5, 3.0),
) -> ScalarField:
    """Random real field with spectrum supported on lo <= |xi| <= hi, unit-seeded.

    Normalized so the sup norm equals `amplitude`.
    """
    rng = np.random.default_rng(np.random.PCG64DXSM(seed))
    noise = rng.standard_normal(grid.shape)
    g = fft_coeffs(noise, grid)
    mag = np.sqrt(grid.xi_sq)
    lo, hi = band
    g *= (mag >= lo) & (mag <= hi)
    vals = ifft_values(g, grid)
    peak = np.max(np.abs(vals))
    if peak > 0:
        vals *= amplitude / peak
    return ScalarField(grid, vals)


def random_symmetric_state(
    grid: SlabGrid,
    seed: int,
    amplitude: float = 1.0,
    band: tuple[float, float] = (0.5, 3.0),
    vertical_modes: int | None = None,
) -> tuple[ScalarField, VectorField]:
    """Random slab pair (r, U) in the symmetry class, band-limited horizontally
    and restricted to |vertical mode| <= vertical_modes (default Nz//3)."""
    rng = np.random.default_rng(np.random.PCG64DXSM(seed))
    kmax = vertical_modes if vertical_modes is not None else max(grid.Nz // 3, 1)
    n_index = np.abs(np.rint(np.fft.fftfreq(grid.Nz) * grid.Nz).astype(int))
    keep_z = (n_index <= kmax)[None, None, :]
    mag = np.sqrt(grid.xi_sq)
    lo, hi = band
    keep = ((mag >= lo) & (mag <= hi)) * keep_z

    def one(parity_even: bool) -> np.ndarray:
        g = fft_coeffs(rng.standard_normal(grid.shape), grid) * keep
        vals = ifft_values(g, grid)
        if parity_even:
            vals = 0.5 * (vals + np.roll(vals[..., ::-1], 1, axis=-1))
        else:
            vals = 0.5 * (vals - np.roll(vals[..., ::-1], 1, axis=-1))
        peak = np.max(np.abs(vals))
        return vals * (amplitude / peak) if peak > 0 else vals

    r = ScalarField(grid, one(True), EVEN)
    U = VectorField(grid, np.stack([one(True), one(True), one(False)]), (EVEN, EVEN, ODD))
    return r, U
