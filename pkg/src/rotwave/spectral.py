"""
Transforms, spectral differential operators, and symmetry-class enforcement.

Normalization is unitary: the l2 norm of the coefficient array equals the
L2(Omega) norm of the field, so Parseval reads directly on coefficients.
"""

from __future__ import annotations

import numpy as np

from .grid import EVEN, ODD, Grid, ScalarField, SlabGrid, SpectralField, VectorField


# ---------------------------------------------------------------------------
# transforms (raw-array helpers plus field-level wrappers)

def fft_coeffs(values: np.ndarray, grid: Grid) -> np.ndarray:
    return np.fft.fftn(values) * grid.norm_factor


def ifft_values(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    return np.fft.ifftn(coeffs / grid.norm_factor).real


def forward_transform(f: ScalarField) -> SpectralField:
    return SpectralField(f.grid, fft_coeffs(f.values, f.grid))


def inverse_transform(g: SpectralField) -> ScalarField:
    return ScalarField(g.grid, ifft_values(g.coeffs, g.grid))


# ---------------------------------------------------------------------------
# norms

def l2_norm(f: ScalarField | VectorField) -> float:
    """L2(Omega) norm computed by (spectrally accurate) trapezoidal quadrature."""
    return float(np.sqrt(f.grid.measure * np.mean(f.values**2)))


def sup_norm(f: ScalarField | VectorField) -> float:
    return float(np.max(np.abs(f.values)))


def sobolev_norm(f: ScalarField, m: int) -> float:
    """W^{m,2} norm with the full (horizontal + vertical) symbol."""
    g = fft_coeffs(f.values, f.grid)
    if isinstance(f.grid, SlabGrid):
        sym = 1.0 + f.grid.xi_sq + f.grid.KAP**2
    else:
        sym = 1.0 + f.grid.xi_sq
    return float(np.sqrt(np.sum(sym**m * np.abs(g) ** 2)))


# ---------------------------------------------------------------------------
# derivative operators (Fourier multipliers)

def _check_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


def grad_h(f: ScalarField) -> VectorField:
    g = fft_coeffs(f.values, f.grid)
    dx = ifft_values(1j * f.grid.XI1 * g, f.grid)
    dy = ifft_values(1j * f.grid.XI2 * g, f.grid)
    return VectorField(f.grid, np.stack([dx, dy]))


def perp_grad_h(f: ScalarField) -> VectorField:
    g = fft_coeffs(f.values, f.grid)
    v1 = ifft_values(-1j * f.grid.XI2 * g, f.grid)
    v2 = ifft_values(1j * f.grid.XI1 * g, f.grid)
    return VectorField(f.grid, np.stack([v1, v2]))


def div_h(v: VectorField) -> ScalarField:
    g1 = fft_coeffs(v.values[0], v.grid)
    g2 = fft_coeffs(v.values[1], v.grid)
    return ScalarField(v.grid, ifft_values(1j * v.grid.XI1 * g1 + 1j * v.grid.XI2 * g2, v.grid))


def curl_h(v: VectorField) -> ScalarField:
    g1 = fft_coeffs(v.values[0], v.grid)
    g2 = fft_coeffs(v.values[1], v.grid)
    return ScalarField(v.grid, ifft_values(1j * v.grid.XI1 * g2 - 1j * v.grid.XI2 * g1, v.grid))


def laplace_h(f: ScalarField) -> ScalarField:
    g = fft_coeffs(f.values, f.grid)
    return ScalarField(f.grid, ifft_values(-f.grid.xi_sq * g, f.grid))


def d_x3(f: ScalarField) -> ScalarField:
    if not isinstance(f.grid, SlabGrid):
        raise ValueError("d_x3 requires a slab grid")
    g = fft_coeffs(f.values, f.grid)
    flipped = {EVEN: ODD, ODD: EVEN}.get(f.parity)
    return ScalarField(f.grid, ifft_values(1j * f.grid.KAP * g, f.grid), flipped)


def dealias(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """Zero the top third of modes in every direction (2/3 rule)."""
    return coeffs * grid.dealias_mask


# ---------------------------------------------------------------------------
# vertical parity

def reflect_x3(values: np.ndarray) -> np.ndarray:
    """Samples of x -> f(x_h, -x3) on the periodic vertical grid."""
    return np.roll(values[..., ::-1], 1, axis=-1)


def even_part_x3(values: np.ndarray) -> np.ndarray:
    return 0.5 * (values + reflect_x3(values))


def odd_part_x3(values: np.ndarray) -> np.ndarray:
    return 0.5 * (values - reflect_x3(values))


def enforce_symmetry_class(rho: ScalarField, u: VectorField) -> tuple[ScalarField, VectorField]:
    """Project onto the slab symmetry class: rho, u_h even in x3; u3 odd.

    This is the L2-orthogonal projection onto the admissible class and is
    idempotent.
    """
    _check_same_grid(rho, u)
    if u.ncomp != 3:
        raise ValueError("symmetry class is defined for 3-component velocities")
    rho_s = ScalarField(rho.grid, even_part_x3(rho.values), EVEN)
    uv = np.stack([
        even_part_x3(u.values[0]),
        even_part_x3(u.values[1]),
        odd_part_x3(u.values[2]),
    ])
    return rho_s, VectorField(u.grid, uv, (EVEN, EVEN, ODD))


def symmetry_defect(rho: ScalarField, u: VectorField) -> float:
    """Sup-norm distance to the symmetry class (monitoring aid)."""
    d = np.max(np.abs(odd_part_x3(rho.values)))
    d = max(d, np.max(np.abs(odd_part_x3(u.values[0]))))
    d = max(d, np.max(np.abs(odd_part_x3(u.values[1]))))
    d = max(d, np.max(np.abs(even_part_x3(u.values[2]))))
    return float(d)
