"""
Smooth frequency and spatial cutoffs used to mollify initial data.

The one-parameter family ties everything to a single scale delta:
psi is a smooth bump on [delta, 1/delta] in |xi|, phi a smooth horizontal
plateau of radius 1/delta, and vertical modes are kept up to |n| <= 1/delta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, ScalarField, SlabGrid, SpectralField


def _bump_glue(t: np.ndarray) -> np.ndarray:
    """exp(-1/t) on t > 0, 0 elsewhere; the standard smooth transition."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smoothstep(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, monotone in between."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    a = _bump_glue(t)
    b = _bump_glue(1.0 - t)
    return a / (a + b + np.finfo(float).tiny)


@dataclass(frozen=True)
class CutoffSpec:
    """Frequency bump psi on (a, b), flat on [a1, b1]; spatial plateau of
    radius R with taper width w; vertical mode bound K."""

    a: float
    b: float
    a1: float
    b1: float
    R: float
    w: float
    K: int

    def __post_init__(self) -> None:
        if not (0 < self.a < self.a1 < self.b1 < self.b):
            raise ValueError("need 0 < a < a1 < b1 < b for the frequency bump")
        if self.R <= 0 or self.w <= 0:
            raise ValueError("spatial plateau radius and taper width must be positive")
        if self.K < 0:
            raise ValueError("vertical mode bound must be non-negative")

    @classmethod
    def from_delta(cls, delta: float) -> "CutoffSpec":
        """Single-scale family: a = delta, b = 1/delta, R = 1/delta, K = floor(1/delta)."""
        if not 0 < delta < 0.5:
            raise ValueError("delta must lie in (0, 1/2)")
        a, b = delta, 1.0 / delta
        return cls(a=a, b=b, a1=2.0 * a, b1=0.5 * b, R=1.0 / delta, w=0.5 / delta,
                   K=int(np.floor(1.0 / delta)))

    def psi(self, r: np.ndarray) -> np.ndarray:
        """Frequency bump evaluated at |xi| = r."""
        r = np.asarray(r, dtype=float)
        up = smoothstep((r - self.a) / (self.a1 - self.a))
        down = smoothstep((self.b - r) / (self.b - self.b1))
        return up * down

    def phi(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Horizontal plateau evaluated at points (x, y)."""
        rad = np.sqrt(np.asarray(x) ** 2 + np.asarray(y) ** 2)
        return smoothstep((self.R + self.w - rad) / self.w)


def apply_frequency_cutoff(f: SpectralField, c: CutoffSpec) -> SpectralField:
    """Multiply coefficients by psi(|xi|) and zero vertical modes above K."""
    grid = f.grid
    mult = c.psi(np.sqrt(grid.xi_sq))
    coeffs = f.coeffs * mult
    if isinstance(grid, SlabGrid):
        n_index = np.rint(np.fft.fftfreq(grid.Nz) * grid.Nz).astype(int)
        keep = np.abs(n_index) <= c.K
        coeffs = coeffs * keep[None, None, :]
    return SpectralField(grid, coeffs)


def apply_spatial_cutoff(f: ScalarField, c: CutoffSpec) -> ScalarField:
    """Pointwise product with the horizontal plateau phi."""
    grid = f.grid
    if isinstance(grid, SlabGrid):
        phi = c.phi(grid.x[:, None, None], grid.y[None, :, None])
    else:
        phi = c.phi(grid.x[:, None], grid.y[None, :])
    return ScalarField(grid, f.values * phi, f.parity)


def frequency_cutoff_multiplier(grid: Grid, c: CutoffSpec) -> np.ndarray:
    """The full spectral multiplier of apply_frequency_cutoff, as an array."""
    mult = c.psi(np.sqrt(grid.xi_sq)) + np.zeros(grid.shape)
    if isinstance(grid, SlabGrid):
        n_index = np.rint(np.fft.fftfreq(grid.Nz) * grid.Nz).astype(int)
        mult = mult * (np.abs(n_index) <= c.K)[None, None, :]
    return mult
