"""
Null space of the wave generator and the orthogonal projection onto it.

Kernel states are geostrophically balanced: a horizontal stream function q
with v = (-d2 q, d1 q) and no vertical dependence. The projection solves
the elliptic problem (-Lap_h + 1) q = curl of the vertically averaged
velocity plus the vertically averaged scalar, mode by mode.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .cutoffs import CutoffSpec, apply_frequency_cutoff, apply_spatial_cutoff
from .grid import EVEN, ODD, PlaneGrid, ScalarField, SlabGrid, SpectralField, VectorField
from .spectral import fft_coeffs, forward_transform, ifft_values, inverse_transform
from .waves import WaveState


@dataclass
class KernelPair:
    """A balanced state: horizontal stream function q and v = perp-grad q."""

    q: ScalarField
    v: VectorField

    def __post_init__(self) -> None:
        if self.q.grid != self.v.grid or self.v.ncomp != 2:
            raise ValueError("KernelPair needs q and a 2-component v on one plane grid")

    @property
    def grid(self) -> PlaneGrid:
        return self.q.grid


def vertical_average(r: ScalarField, U: VectorField) -> tuple[ScalarField, VectorField]:
    """Project onto x3-independent functions; the vertical velocity drops out."""
    if not isinstance(r.grid, SlabGrid) or r.grid != U.grid:
        raise ValueError("vertical_average expects slab fields on one grid")
    plane = r.grid.plane
    r_bar = ScalarField(plane, r.values.mean(axis=-1))
    U_bar = VectorField(plane, U.values[:2].mean(axis=-1))
    return r_bar, U_bar


def project_to_kernel(r: ScalarField, U: VectorField) -> KernelPair:
    """Orthogonal L2 projection of (r, U) onto the kernel.

    Solves (-Lap_h + 1) q = r_bar - curl_h(U_bar) exactly per horizontal mode.
    The sign of the curl term is fixed by requiring a genuine orthogonal
    projection (idempotent, residual orthogonal to every balanced pair); it
    is verified against a brute-force least-squares oracle in the tests.
    """
    r_bar, U_bar = vertical_average(r, U)
    plane = r_bar.grid
    rhs_hat = (
        fft_coeffs(r_bar.values, plane)
        - 1j * plane.XI1 * fft_coeffs(U_bar.values[1], plane)
        + 1j * plane.XI2 * fft_coeffs(U_bar.values[0], plane)
    )
    q_hat = rhs_hat / (1.0 + plane.xi_sq)
    q = ScalarField(plane, ifft_values(q_hat, plane))
    v = VectorField(
        plane,
        np.stack(
            [
                ifft_values(-1j * plane.XI2 * q_hat, plane),
                ifft_values(1j * plane.XI1 * q_hat, plane),
            ]
        ),
    )
    return KernelPair(q, v)


def kernel_wave_state(kp: KernelPair, grid: SlabGrid) -> WaveState:
    """Embed a balanced pair as a slab wave state (constant in x3, V3 = 0)."""
    if kp.grid != grid.plane:
        raise ValueError("kernel pair does not match the slab's horizontal grid")
    ones = np.ones(grid.Nz)
    s = ScalarField(grid, kp.q.values[..., None] * ones, EVEN)
    V = VectorField(
        grid,
        np.stack(
            [
                kp.v.values[0][..., None] * ones,
                kp.v.values[1][..., None] * ones,
                np.zeros(grid.shape),
            ]
        ),
        (EVEN, EVEN, ODD),
    )
    return WaveState(s, V)


def kernel_inner_product(r: ScalarField, U: VectorField, kp: KernelPair) -> float:
    """L2(Omega) inner product of a slab pair with an embedded kernel pair."""
    grid = r.grid
    r_bar, U_bar = vertical_average(r, U)
    plane = grid.plane
    val = np.mean(r_bar.values * kp.q.values)
    val += np.mean(U_bar.values[0] * kp.v.values[0])
    val += np.mean(U_bar.values[1] * kp.v.values[1])
    return float(grid.measure * val)


@dataclass
class DataSplit:
    """Mollified initial data split into a balanced part and a wave part."""

    q0: ScalarField
    v0: VectorField
    s0: ScalarField
    V0: VectorField
    delta: float

    @property
    def kernel_pair(self) -> KernelPair:
        return KernelPair(self.q0, self.v0)


def mollify(f: ScalarField, c: CutoffSpec) -> ScalarField:
    """Spatial plateau cutoff followed by the frequency bump and vertical bound."""
    g = forward_transform(apply_spatial_cutoff(f, c))
    return ScalarField(f.grid, inverse_transform(apply_frequency_cutoff(g, c)).values, f.parity)


def decompose_initial_data(
    rho1: ScalarField, u0: VectorField, c: CutoffSpec, delta: float = np.nan
) -> DataSplit:
    """Mollify (rho1, u0) and split into kernel and kernel-orthogonal parts.

    The balanced part solves the elliptic problem for the mollified data;
    the wave part is the remainder and is orthogonal to every kernel pair.
    """
    grid = rho1.grid
    if not isinstance(grid, SlabGrid) or grid != u0.grid:
        raise ValueError("decompose_initial_data expects slab fields on one grid")
    rho_m = mollify(rho1, c)
    u_m = VectorField(
        grid,
        np.stack([mollify(u0.component(i), c).values for i in range(3)]),
        u0.parity,
    )

    in_norm = np.sqrt(np.mean(rho1.values**2) + np.sum(np.mean(u0.values**2, axis=(1, 2, 3))))
    out_norm = np.sqrt(np.mean(rho_m.values**2) + np.sum(np.mean(u_m.values**2, axis=(1, 2, 3))))
    if in_norm > 0 and out_norm < 1e-14 * in_norm:
        warnings.warn("frequency cutoff annihilated all resolved modes; returning zero split")

    kp = project_to_kernel(rho_m, u_m)
    ones = np.ones(grid.Nz)
    s0 = ScalarField(grid, rho_m.values - kp.q.values[..., None] * ones, EVEN)
    V0 = VectorField(
        grid,
        np.stack(
            [
                u_m.values[0] - kp.v.values[0][..., None] * ones,
                u_m.values[1] - kp.v.values[1][..., None] * ones,
                u_m.values[2],
            ]
        ),
        (EVEN, EVEN, ODD),
    )
    return DataSplit(q0=kp.q, v0=kp.v, s0=s0, V0=V0, delta=delta)
