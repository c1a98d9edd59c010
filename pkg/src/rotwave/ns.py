"""
Desk-scale solver for the scaled rotating compressible Navier-Stokes system.

State variables are (sigma, m) = ((rho - 1)/eps, rho u), which makes the
stiff 1/eps skeleton exactly the acoustic-Rossby generator:

    d sigma/dt = -(1/eps) div m
    d m/dt     = -(1/eps) (omega x m + grad sigma)  +  nonlinear remainder.

The stiff part is integrated exactly with the cached wave propagator
(Lawson / integrating-factor RK4), so the stable time step is set by
advection and viscosity, not by eps.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import EVEN, ODD, ScalarField, SlabGrid, VectorField
from .spectral import (
    even_part_x3,
    fft_coeffs,
    ifft_values,
    odd_part_x3,
)
from .waves import WavePropagator


class VacuumError(RuntimeError):
    pass


class CFLError(RuntimeError):
    pass


@dataclass(frozen=True)
class PressureLaw:
    """gamma-law pressure p(rho) = rho^gamma / gamma, normalized so p'(1) = 1."""

    gamma: float

    def __post_init__(self) -> None:
        if self.gamma <= 1.5:
            raise ValueError(f"gamma must exceed 3/2, got {self.gamma}")

    def p(self, rho):
        return np.asarray(rho) ** self.gamma / self.gamma

    def dp(self, rho):
        return np.asarray(rho) ** (self.gamma - 1.0)

    def H(self, rho):
        g = self.gamma
        rho = np.asarray(rho)
        return (rho**g - rho) / (g * (g - 1.0))

    def dH(self, rho):
        g = self.gamma
        return (g * np.asarray(rho) ** (g - 1.0) - 1.0) / (g * (g - 1.0))

    def d2H(self, rho):
        return np.asarray(rho) ** (self.gamma - 2.0)

    def pressure_remainder(self, sigma: np.ndarray, eps: float) -> np.ndarray:
        """r(sigma; eps) = [p(1 + eps sigma) - p(1) - eps sigma] / eps^2.

        Series-safe for |eps sigma| small to avoid catastrophic cancellation.
        """
        g = self.gamma
        x = eps * np.asarray(sigma, dtype=float)
        small = np.abs(x) < 1e-4
        out = np.empty_like(x)
        xs = x[small]
        # p(1+x) - p(1) - x = (g-1) x^2/2 + (g-1)(g-2) x^3/6 + (g-1)(g-2)(g-3) x^4/24 + ...
        out[small] = (
            (g - 1.0)
            * xs**2
            * (0.5 + (g - 2.0) * xs / 6.0 + (g - 2.0) * (g - 3.0) * xs**2 / 24.0)
        )
        xl = x[~small]
        out[~small] = self.p(1.0 + xl) - self.p(1.0) - xl
        return out / eps**2

    def free_energy_remainder(self, sigma: np.ndarray, eps: float) -> np.ndarray:
        """[H(1 + eps sigma) - H'(1) eps sigma - H(1)] / eps^2, series-safe."""
        g = self.gamma
        x = eps * np.asarray(sigma, dtype=float)
        small = np.abs(x) < 1e-4
        out = np.empty_like(x)
        xs = x[small]
        # H''(1) = 1, H'''(1) = g - 2, H''''(1) = (g-2)(g-3)
        out[small] = xs**2 * (0.5 + (g - 2.0) * xs / 6.0 + (g - 2.0) * (g - 3.0) * xs**2 / 24.0)
        xl = x[~small]
        out[~small] = self.H(1.0 + xl) - self.dH(1.0) * xl - self.H(1.0)
        return out / eps**2


@dataclass
class FluidState:
    """Compressible state stored as (sigma, m); rho = 1 + eps sigma must stay positive."""

    grid: SlabGrid
    sigma: np.ndarray
    m: np.ndarray
    eps: float

    def __post_init__(self) -> None:
        self.sigma = np.asarray(self.sigma, dtype=float)
        self.m = np.asarray(self.m, dtype=float)
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.sigma.shape != self.grid.shape or self.m.shape != (3, *self.grid.shape):
            raise ValueError("state arrays do not match the grid")

    @property
    def rho(self) -> np.ndarray:
        return 1.0 + self.eps * self.sigma

    @property
    def u(self) -> np.ndarray:
        return self.m / self.rho

    def to_coeffs(self) -> np.ndarray:
        g = self.grid
        return np.stack(
            [fft_coeffs(self.sigma, g)] + [fft_coeffs(self.m[i], g) for i in range(3)],
            axis=-1,
        )

    @classmethod
    def from_coeffs(cls, grid: SlabGrid, coeffs: np.ndarray, eps: float) -> "FluidState":
        sigma = ifft_values(coeffs[..., 0], grid)
        m = np.stack([ifft_values(coeffs[..., i], grid) for i in (1, 2, 3)])
        return cls(grid, sigma, m, eps)


def gaussian_hill_potential(grid: SlabGrid, amplitude: float = 1.0, radius: float = 1.0) -> np.ndarray:
    """Smooth localized forcing potential G(x_h), even in x3 by construction."""
    X, Y, _ = grid.meshgrid()
    return amplitude * np.exp(-(X**2 + Y**2) / (2.0 * radius**2))


class NSSolver:
    """Lawson-RK4 integrator for the scaled system on a fixed grid."""

    def __init__(
        self,
        grid: SlabGrid,
        law: PressureLaw,
        eps: float,
        mu: float,
        G: np.ndarray | None = None,
        propagator: WavePropagator | None = None,
        rho_min: float = 1e-3,
        cfl: float = 0.5,
        dealias: bool = True,
    ):
        if mu < 0:
            raise ValueError("viscosity must be non-negative")
        self.grid = grid
        self.law = law
        self.eps = eps
        self.mu = mu
        self.rho_min = rho_min
        self.cfl = cfl
        self.dealias = dealias
        self.prop = propagator if propagator is not None else WavePropagator(grid)
        if G is not None:
            gG = fft_coeffs(G, grid)
            self.grad_G = np.stack(
                [
                    ifft_values(1j * grid.XI1 * gG, grid),
                    ifft_values(1j * grid.XI2 * gG, grid),
                    ifft_values(1j * grid.KAP * gG, grid),
                ]
            )
        else:
            self.grad_G = None

    # -- right-hand side pieces ------------------------------------------

    def stiff_tendency(self, coeffs: np.ndarray) -> np.ndarray:
        """The exact linear part -(1/eps) B applied spectrally (A-action per mode)."""
        return -self.prop.apply_generator(coeffs) / self.eps

    def nonlinear_remainder(self, coeffs: np.ndarray) -> np.ndarray:
        """Tendency of (sigma, m) beyond the stiff skeleton.

        The continuity equation is entirely linear in (sigma, m); only the
        momentum components receive advection, the quadratic-and-higher part
        of the pressure, viscosity, and forcing.
        """
        g = self.grid
        mask = g.dealias_mask if self.dealias else 1.0
        sigma = ifft_values(coeffs[..., 0], g)
        m = np.stack([ifft_values(coeffs[..., i], g) for i in (1, 2, 3)])
        rho = 1.0 + self.eps * sigma
        if np.min(rho) <= self.rho_min:
            raise VacuumError(f"density reached {np.min(rho):.3e} <= rho_min = {self.rho_min}")
        u = m / rho

        K = (g.XI1, g.XI2, g.KAP)
        out = np.zeros_like(coeffs)

        # advection: -sum_j d_j (m_i u_j), dealiased products
        for i in range(3):
            acc = 0.0
            for j in range(3):
                acc = acc + 1j * K[j] * (fft_coeffs(m[i] * u[j], g) * mask)
            out[..., 1 + i] -= acc

        # pressure remainder: -grad r(sigma)
        r_hat = fft_coeffs(self.law.pressure_remainder(sigma, self.eps), g) * mask
        for i in range(3):
            out[..., 1 + i] -= 1j * K[i] * r_hat

        # viscosity: mu (Lap u + (1/3) grad div u), from u-hat
        if self.mu > 0:
            u_hat = [fft_coeffs(u[i], g) for i in range(3)]
            lap = -(g.xi_sq + g.KAP**2)
            div_u_hat = sum(1j * K[j] * u_hat[j] for j in range(3))
            for i in range(3):
                out[..., 1 + i] += self.mu * (
                    lap * u_hat[i] + (1.0 / 3.0) * 1j * K[i] * div_u_hat
                )

        # forcing: rho grad G
        if self.grad_G is not None:
            for i in range(3):
                out[..., 1 + i] += fft_coeffs(rho * self.grad_G[i], g)
        return out

    def full_tendency(self, coeffs: np.ndarray) -> np.ndarray:
        return self.stiff_tendency(coeffs) + self.nonlinear_remainder(coeffs)

    # -- time stepping ----------------------------------------------------

    def cfl_limit(self, state: FluidState) -> float:
        dx = min(self.grid.dx, self.grid.dy, self.grid.dz)
        umax = float(np.max(np.sqrt(np.sum(state.u**2, axis=0))))
        dt_adv = self.cfl * dx / umax if umax > 0 else np.inf
        dt_visc = 0.25 * dx**2 / self.mu if self.mu > 0 else np.inf
        return min(dt_adv, dt_visc)

    def step_coeffs(self, y: np.ndarray, dt: float) -> np.ndarray:
        """One Lawson-RK4 step on stacked coefficients (exact stiff propagation)."""
        E2 = lambda c: self.prop.apply_exp(c, dt / 2.0, self.eps)
        N = self.nonlinear_remainder
        k1 = N(y)
        k2 = N(E2(y + 0.5 * dt * k1))
        E2y = E2(y)
        k3 = N(E2y + 0.5 * dt * k2)
        Ey = E2(E2y)
        k4 = N(Ey + dt * E2(k3))
        return Ey + (dt / 6.0) * (E2(E2(k1)) + 2.0 * E2(k2 + k3) + k4)

    def step(self, state: FluidState, dt: float) -> FluidState:
        if dt <= 0:
            raise ValueError("dt must be positive")
        limit = self.cfl_limit(state)
        if dt > limit:
            umax = float(np.max(np.sqrt(np.sum(state.u**2, axis=0))))
            raise CFLError(f"dt = {dt} exceeds stable limit {limit:.6g} (max |u| = {umax:.6g})")
        y = self.step_coeffs(state.to_coeffs(), dt)
        return FluidState.from_coeffs(self.grid, y, self.eps)

    # -- diagnostics along a run ------------------------------------------

    def energy(self, state: FluidState) -> float:
        """The scaled energy functional: kinetic plus (1/eps^2) free energy."""
        g = self.grid
        rho = state.rho
        kinetic = 0.5 * np.sum(state.m**2, axis=0) / rho
        free = self.law.free_energy_remainder(state.sigma, self.eps)
        return float(g.measure * np.mean(kinetic + free))

    def dissipation_rate(self, state: FluidState) -> float:
        """int S(grad u) : grad u, computed from spectral velocity gradients."""
        if self.mu == 0:
            return 0.0
        g = self.grid
        u = state.u
        K = (g.XI1, g.XI2, g.KAP)
        u_hat = [fft_coeffs(u[i], g) for i in range(3)]
        du = np.empty((3, 3, *g.shape))
        for i in range(3):
            for j in range(3):
                du[i, j] = ifft_values(1j * K[j] * u_hat[i], g)
        div_u = du[0, 0] + du[1, 1] + du[2, 2]
        s_dot = 0.0
        for i in range(3):
            for j in range(3):
                S_ij = self.mu * (du[i, j] + du[j, i] - (2.0 / 3.0) * div_u * (i == j))
                s_dot = s_dot + S_ij * du[i, j]
        return float(g.measure * np.mean(s_dot))

    def forcing_power(self, state: FluidState) -> float:
        if self.grad_G is None:
            return 0.0
        g = self.grid
        return float(g.measure * np.mean(np.sum(state.rho * self.grad_G * state.u, axis=0)))


def enforce_state_symmetry(state: FluidState) -> FluidState:
    """Project (sigma, m) back onto the slab symmetry class."""
    sigma = even_part_x3(state.sigma)
    m = np.stack(
        [even_part_x3(state.m[0]), even_part_x3(state.m[1]), odd_part_x3(state.m[2])]
    )
    return FluidState(state.grid, sigma, m, state.eps)


def state_symmetry_defect(state: FluidState) -> float:
    d = np.max(np.abs(odd_part_x3(state.sigma)))
    d = max(d, np.max(np.abs(odd_part_x3(state.m[0]))))
    d = max(d, np.max(np.abs(odd_part_x3(state.m[1]))))
    d = max(d, np.max(np.abs(even_part_x3(state.m[2]))))
    return float(d)


@dataclass
class NSTrajectory:
    """Per-step scalar series plus strided snapshots of a compressible run."""

    grid: SlabGrid
    eps: float
    mu: float
    law: PressureLaw
    times: np.ndarray
    energy: np.ndarray
    dissipation: np.ndarray
    forcing_power: np.ndarray
    mass: np.ndarray
    sqrt_rho_u_l2: np.ndarray
    sigma_ess_l2: np.ndarray
    residual_rho: np.ndarray
    residual_one: np.ndarray
    symmetry_defect: np.ndarray
    snapshot_times: np.ndarray
    snapshots: list[tuple[np.ndarray, np.ndarray]]
    invalid: bool = False

    def energy_residual(self) -> np.ndarray:
        """Discrete defect of the energy inequality, cumulative in time.

        residual(t) = E(t) + int_0^t dissipation - E(0) - int_0^t forcing power;
        zero for an exact smooth solution, non-positive for weak ones.
        """
        t = self.times
        cum_d = np.concatenate([[0.0], np.cumsum(0.5 * (self.dissipation[1:] + self.dissipation[:-1]) * np.diff(t))])
        cum_f = np.concatenate([[0.0], np.cumsum(0.5 * (self.forcing_power[1:] + self.forcing_power[:-1]) * np.diff(t))])
        return self.energy + cum_d - self.energy[0] - cum_f


def run_ns(
    solver: NSSolver,
    sigma0: ScalarField,
    u0: VectorField,
    T: float,
    dt: float,
    snapshot_stride: int = 0,
    n_sym: int = 16,
    ess_chi=None,
) -> NSTrajectory:
    """Advance the compressible system to time T with full diagnostics.

    Initial data is given as (sigma0, u0); the symmetry class is enforced on
    entry and re-enforced every `n_sym` steps. `ess_chi` maps density samples
    to the essential cutoff weight chi(rho) in [0, 1] (default: the standard
    plateau around 1 with half-width 1/4, taper to 1/2).
    """
    from .diagnostics import EssResSpec

    grid = solver.grid
    if ess_chi is None:
        ess_chi = EssResSpec().chi
    gamma = solver.law.gamma

    sig = even_part_x3(np.asarray(sigma0.values, dtype=float))
    m0 = (1.0 + solver.eps * sig) * np.stack(
        [even_part_x3(u0.values[0]), even_part_x3(u0.values[1]), odd_part_x3(u0.values[2])]
    )
    state = FluidState(grid, sig, m0, solver.eps)

    n_steps = int(round(T / dt))
    times, energies, diss, forc, mass = [], [], [], [], []
    mom_l2, ess_l2, res_rho, res_one, symdef = [], [], [], [], []
    snap_times, snaps = [], []

    def record(t: float, st: FluidState) -> None:
        times.append(t)
        energies.append(solver.energy(st))
        diss.append(solver.dissipation_rate(st))
        forc.append(solver.forcing_power(st))
        mass.append(float(grid.measure * np.mean(st.sigma)))
        rho = st.rho
        chi = ess_chi(rho)
        mom_l2.append(float(np.sqrt(grid.measure * np.mean(rho * np.sum(st.u**2, axis=0)))))
        ess_l2.append(float(np.sqrt(grid.measure * np.mean((chi * st.sigma) ** 2))))
        res_rho.append(float(grid.measure * np.mean(np.abs((1.0 - chi) * rho) ** gamma)))
        res_one.append(float(grid.measure * np.mean(np.abs(1.0 - chi) ** gamma)))
        symdef.append(state_symmetry_defect(st))

    record(0.0, state)
    if snapshot_stride:
        snap_times.append(0.0)
        snaps.append((state.sigma.copy(), state.m.copy()))

    invalid = False
    y = state.to_coeffs()
    for n in range(1, n_steps + 1):
        limit = solver.cfl_limit(state)
        if dt > limit:
            raise CFLError(f"dt = {dt} exceeds stable limit {limit:.6g} at step {n}")
        y = solver.step_coeffs(y, dt)
        if not np.all(np.isfinite(y)):
            invalid = True
            break
        state = FluidState.from_coeffs(grid, y, solver.eps)
        if n % n_sym == 0:
            state = enforce_state_symmetry(state)
            y = state.to_coeffs()
        record(n * dt, state)
        if snapshot_stride and (n % snapshot_stride == 0 or n == n_steps):
            snap_times.append(n * dt)
            snaps.append((state.sigma.copy(), state.m.copy()))

    if not snapshot_stride:
        snap_times.append(times[-1])
        snaps.append((state.sigma.copy(), state.m.copy()))

    return NSTrajectory(
        grid=grid,
        eps=solver.eps,
        mu=solver.mu,
        law=solver.law,
        times=np.asarray(times),
        energy=np.asarray(energies),
        dissipation=np.asarray(diss),
        forcing_power=np.asarray(forc),
        mass=np.asarray(mass),
        sqrt_rho_u_l2=np.asarray(mom_l2),
        sigma_ess_l2=np.asarray(ess_l2),
        residual_rho=np.asarray(res_rho),
        residual_one=np.asarray(res_one),
        symmetry_defect=np.asarray(symdef),
        snapshot_times=np.asarray(snap_times),
        snapshots=snaps,
        invalid=invalid,
    )
