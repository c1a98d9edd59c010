"""
Pseudo-spectral solver for the quasi-geostrophic limit equation.

The evolved variable is the potential vorticity P = Lap_h q - q, which is
transported by the divergence-free field v = perp-grad q:

    dP/dt + v . grad_h P = 0.

Inverting P -> q is exact per mode (division by -(1 + |xi|^2)), so the
time step never differentiates through the inversion. Time stepping is
classical RK4 with 2/3-rule dealiasing inside the advection product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import PlaneGrid, ScalarField
from .spectral import fft_coeffs, ifft_values


class CFLError(RuntimeError):
    pass


def helmholtz(q: ScalarField) -> ScalarField:
    """P = Lap_h q - q."""
    g = fft_coeffs(q.values, q.grid)
    return ScalarField(q.grid, ifft_values(-(1.0 + q.grid.xi_sq) * g, q.grid))


def invert_helmholtz(P: ScalarField) -> ScalarField:
    """Exact inverse of q -> Lap_h q - q; no zero divisor since 1 + |xi|^2 >= 1."""
    g = fft_coeffs(P.values, P.grid)
    return ScalarField(P.grid, ifft_values(-g / (1.0 + P.grid.xi_sq), P.grid))


def _rhs_hat(P_hat: np.ndarray, grid: PlaneGrid) -> np.ndarray:
    """Spectral tendency of P: -dealias(v . grad P), v = perp-grad q."""
    mask = grid.dealias_mask
    q_hat = -P_hat / (1.0 + grid.xi_sq)
    v1 = ifft_values(-1j * grid.XI2 * q_hat * mask, grid)
    v2 = ifft_values(1j * grid.XI1 * q_hat * mask, grid)
    Px = ifft_values(1j * grid.XI1 * P_hat * mask, grid)
    Py = ifft_values(1j * grid.XI2 * P_hat * mask, grid)
    return -fft_coeffs(v1 * Px + v2 * Py, grid) * mask


def qg_rhs(q: ScalarField) -> ScalarField:
    """Time derivative of P = Lap_h q - q for stream function q."""
    grid = q.grid
    P_hat = -(1.0 + grid.xi_sq) * fft_coeffs(q.values, grid)
    return ScalarField(grid, ifft_values(_rhs_hat(P_hat, grid), grid))


def max_speed(q: ScalarField) -> float:
    g = fft_coeffs(q.values, q.grid)
    v1 = ifft_values(-1j * q.grid.XI2 * g, q.grid)
    v2 = ifft_values(1j * q.grid.XI1 * g, q.grid)
    return float(np.max(np.sqrt(v1**2 + v2**2)))


def _check_cfl(q: ScalarField, dt: float, cfl: float) -> None:
    if dt <= 0:
        raise ValueError("dt must be positive")
    vmax = max_speed(q)
    dx = min(q.grid.dx, q.grid.dy)
    if vmax > 0 and dt > cfl * dx / vmax:
        raise CFLError(
            f"dt = {dt} violates the advective CFL: max |v| = {vmax:.6g}, "
            f"limit = {cfl * dx / vmax:.6g}"
        )


def _rk4(P_hat: np.ndarray, dt: float, grid: PlaneGrid) -> np.ndarray:
    k1 = _rhs_hat(P_hat, grid)
    k2 = _rhs_hat(P_hat + 0.5 * dt * k1, grid)
    k3 = _rhs_hat(P_hat + 0.5 * dt * k2, grid)
    k4 = _rhs_hat(P_hat + dt * k3, grid)
    return P_hat + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step(q: ScalarField, dt: float, cfl: float = 0.5) -> ScalarField:
    """One RK4 step on the potential vorticity, returned as a stream function."""
    _check_cfl(q, dt, cfl)
    grid = q.grid
    P_hat = -(1.0 + grid.xi_sq) * fft_coeffs(q.values, grid)
    P_hat = _rk4(P_hat, dt, grid)
    return ScalarField(grid, ifft_values(-P_hat / (1.0 + grid.xi_sq), grid))


def energy(q_hat: np.ndarray, grid: PlaneGrid) -> float:
    """Conserved energy int (|grad_h q|^2 + q^2) via Parseval."""
    return float(np.sum((1.0 + grid.xi_sq) * np.abs(q_hat) ** 2))


def _tail_fraction(P_hat: np.ndarray, grid: PlaneGrid) -> float:
    """Fraction of |P|^2 carried by the top sixth of modes per axis."""
    nx = np.abs(np.fft.fftfreq(grid.Nx) * grid.Nx)
    ny = np.abs(np.fft.fftfreq(grid.Ny) * grid.Ny)
    tail = (nx[:, None] >= grid.Nx * (1 / 2 - 1 / 12)) | (
        ny[None, :] >= grid.Ny * (1 / 2 - 1 / 12)
    )
    total = np.sum(np.abs(P_hat) ** 2)
    if total == 0:
        return 0.0
    return float(np.sum(np.abs(P_hat[tail]) ** 2) / total)


@dataclass
class QGTrajectory:
    times: np.ndarray
    energy: np.ndarray
    p_l2: np.ndarray
    snapshot_times: np.ndarray
    snapshots: list[np.ndarray]
    tail_fraction: np.ndarray
    under_resolved: bool
    aborted: bool = False
    grid: PlaneGrid | None = None


def run_qg(
    q0: ScalarField,
    T: float,
    dt: float,
    snapshot_stride: int = 0,
    cfl: float = 0.5,
    tail_limit: float = 1e-6,
) -> QGTrajectory:
    """Advance the QG equation to time T recording conservation diagnostics.

    The run is flagged under-resolved if the spectral tail fraction of P
    exceeds `tail_limit` at any recorded time; NaN detection aborts with the
    last good snapshot retained.
    """
    grid = q0.grid
    _check_cfl(q0, dt, cfl)
    n_steps = int(round(T / dt))
    P_hat = -(1.0 + grid.xi_sq) * fft_coeffs(q0.values, grid)

    times = [0.0]
    energies = [energy(-P_hat / (1.0 + grid.xi_sq), grid)]
    p_l2 = [float(np.sqrt(np.sum(np.abs(P_hat) ** 2)))]
    tails = [_tail_fraction(P_hat, grid)]
    snap_times = [0.0]
    snaps = [ifft_values(-P_hat / (1.0 + grid.xi_sq), grid)]
    aborted = False

    for n in range(1, n_steps + 1):
        P_new = _rk4(P_hat, dt, grid)
        if not np.all(np.isfinite(P_new)):
            aborted = True
            break
        P_hat = P_new
        t = n * dt
        times.append(t)
        q_hat = -P_hat / (1.0 + grid.xi_sq)
        energies.append(energy(q_hat, grid))
        p_l2.append(float(np.sqrt(np.sum(np.abs(P_hat) ** 2))))
        tails.append(_tail_fraction(P_hat, grid))
        if snapshot_stride and (n % snapshot_stride == 0 or n == n_steps):
            snap_times.append(t)
            snaps.append(ifft_values(q_hat, grid))
    if not snapshot_stride:
        snap_times.append(times[-1])
        snaps.append(ifft_values(-P_hat / (1.0 + grid.xi_sq), grid))

    tails = np.asarray(tails)
    return QGTrajectory(
        times=np.asarray(times),
        energy=np.asarray(energies),
        p_l2=np.asarray(p_l2),
        snapshot_times=np.asarray(snap_times),
        snapshots=snaps,
        tail_fraction=tails,
        under_resolved=bool(np.any(tails > tail_limit)),
        aborted=aborted,
        grid=grid,
    )
