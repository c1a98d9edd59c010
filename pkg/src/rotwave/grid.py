"""
Grids and field containers for the slab domain.

The domain is a horizontal torus [-L, L)^2 crossed with the 2-periodic
vertical interval [-1, 1). Horizontal wavenumbers are (pi/L) * n with
integer n; vertical wavenumbers are pi * n so that exp(i * kappa * x3)
is exactly 2-periodic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

EVEN = "even"
ODD = "odd"


def _check_size(name: str, n: int) -> None:
    if n < 4 or n % 2 != 0:
        raise ValueError(f"{name} must be an even integer >= 4, got {n}")


@dataclass(frozen=True)
class PlaneGrid:
    """Uniform grid on the horizontal torus [-L, L)^2."""

    L: float
    Nx: int
    Ny: int

    def __post_init__(self) -> None:
        if self.L <= 0:
            raise ValueError(f"L must be positive, got {self.L}")
        _check_size("Nx", self.Nx)
        _check_size("Ny", self.Ny)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.Nx, self.Ny)

    @property
    def measure(self) -> float:
        return (2.0 * self.L) ** 2

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.Nx

    @property
    def dy(self) -> float:
        return 2.0 * self.L / self.Ny

    @cached_property
    def x(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.Nx)

    @cached_property
    def y(self) -> np.ndarray:
        return -self.L + self.dy * np.arange(self.Ny)

    @cached_property
    def xi1(self) -> np.ndarray:
        """Horizontal wavenumbers along x, FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.Nx, d=self.dx)

    @cached_property
    def xi2(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.Ny, d=self.dy)

    @cached_property
    def XI1(self) -> np.ndarray:
        return self.xi1[:, None]

    @cached_property
    def XI2(self) -> np.ndarray:
        return self.xi2[None, :]

    @cached_property
    def KAP(self) -> np.ndarray:
        # No vertical direction; zero so shared formulas broadcast.
        return np.zeros((1, 1))

    @cached_property
    def xi_sq(self) -> np.ndarray:
        return self.XI1**2 + self.XI2**2

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask (True on kept modes)."""
        mx = np.abs(np.fft.fftfreq(self.Nx) * self.Nx) < self.Nx / 3.0
        my = np.abs(np.fft.fftfreq(self.Ny) * self.Ny) < self.Ny / 3.0
        return mx[:, None] & my[None, :]

    @property
    def norm_factor(self) -> float:
        """Unitary transform scaling: coeffs = fftn(f) * norm_factor."""
        return np.sqrt(self.measure) / (self.Nx * self.Ny)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="ij")


@dataclass(frozen=True)
class SlabGrid:
    """Horizontal torus [-L, L)^2 times the 2-periodic vertical interval."""

    L: float
    Nx: int
    Ny: int
    Nz: int

    def __post_init__(self) -> None:
        if self.L <= 0:
            raise ValueError(f"L must be positive, got {self.L}")
        _check_size("Nx", self.Nx)
        _check_size("Ny", self.Ny)
        _check_size("Nz", self.Nz)

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.Nx, self.Ny, self.Nz)

    @property
    def measure(self) -> float:
        # vertical period is exactly 2
        return (2.0 * self.L) ** 2 * 2.0

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.Nx

    @property
    def dy(self) -> float:
        return 2.0 * self.L / self.Ny

    @property
    def dz(self) -> float:
        return 2.0 / self.Nz

    @cached_property
    def x(self) -> np.ndarray:
        return -self.L + self.dx * np.arange(self.Nx)

    @cached_property
    def y(self) -> np.ndarray:
        return -self.L + self.dy * np.arange(self.Ny)

    @cached_property
    def z(self) -> np.ndarray:
        return -1.0 + self.dz * np.arange(self.Nz)

    @cached_property
    def xi1(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.Nx, d=self.dx)

    @cached_property
    def xi2(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.Ny, d=self.dy)

    @cached_property
    def kappa(self) -> np.ndarray:
        """Vertical wavenumbers pi * n, FFT ordering."""
        return 2.0 * np.pi * np.fft.fftfreq(self.Nz, d=self.dz)

    @cached_property
    def XI1(self) -> np.ndarray:
        return self.xi1[:, None, None]

    @cached_property
    def XI2(self) -> np.ndarray:
        return self.xi2[None, :, None]

    @cached_property
    def KAP(self) -> np.ndarray:
        return self.kappa[None, None, :]

    @cached_property
    def xi_sq(self) -> np.ndarray:
        return self.XI1**2 + self.XI2**2 + np.zeros((1, 1, self.Nz))

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        mx = np.abs(np.fft.fftfreq(self.Nx) * self.Nx) < self.Nx / 3.0
        my = np.abs(np.fft.fftfreq(self.Ny) * self.Ny) < self.Ny / 3.0
        mz = np.abs(np.fft.fftfreq(self.Nz) * self.Nz) < self.Nz / 3.0
        return mx[:, None, None] & my[None, :, None] & mz[None, None, :]

    @property
    def norm_factor(self) -> float:
        return np.sqrt(self.measure) / (self.Nx * self.Ny * self.Nz)

    @cached_property
    def plane(self) -> PlaneGrid:
        """The horizontal grid underlying this slab."""
        return PlaneGrid(self.L, self.Nx, self.Ny)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, self.z, indexing="ij")


def make_grid(L: float, Nx: int, Ny: int, Nz: int) -> SlabGrid:
    """Build a slab grid, rejecting odd or tiny sizes and non-positive L."""
    return SlabGrid(L, Nx, Ny, Nz)


Grid = PlaneGrid | SlabGrid


def _require_finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        raise ValueError(f"{what} contains non-finite values")


@dataclass
class ScalarField:
    """Real samples of a scalar on a grid, with an optional vertical parity tag."""

    grid: Grid
    values: np.ndarray
    parity: str | None = None

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"field shape {self.values.shape} does not match grid {self.grid.shape}"
            )
        _require_finite(self.values, "ScalarField")

    @classmethod
    def zeros(cls, grid: Grid, parity: str | None = None) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape), parity)

    @classmethod
    def from_function(cls, grid: Grid, f, parity: str | None = None) -> "ScalarField":
        return cls(grid, f(*grid.meshgrid()), parity)


@dataclass
class VectorField:
    """Real vector field with 2 or 3 components, axis 0 indexing the component."""

    grid: Grid
    values: np.ndarray
    parity: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != len(self.grid.shape) + 1 or self.values.shape[0] not in (2, 3):
            raise ValueError(f"expected (ncomp, *grid.shape), got {self.values.shape}")
        if self.values.shape[1:] != self.grid.shape:
            raise ValueError(
                f"field shape {self.values.shape[1:]} does not match grid {self.grid.shape}"
            )
        _require_finite(self.values, "VectorField")

    @property
    def ncomp(self) -> int:
        return self.values.shape[0]

    def component(self, i: int) -> ScalarField:
        p = self.parity[i] if self.parity is not None else None
        return ScalarField(self.grid, self.values[i], p)

    @classmethod
    def zeros(cls, grid: Grid, ncomp: int = 3, parity=None) -> "VectorField":
        return cls(grid, np.zeros((ncomp, *grid.shape)), parity)


@dataclass
class SpectralField:
    """Complex Fourier coefficients of a scalar field (unitary normalization)."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != self.grid.shape:
            raise ValueError(
                f"coefficient shape {self.coeffs.shape} does not match grid {self.grid.shape}"
            )
