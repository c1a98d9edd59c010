"""
Exact acoustic-Rossby propagator.

Each Fourier mode (xi, kappa) of the pair (s, V) evolves by the 4x4
unitary exp(-i (t/eps) A(xi, kappa)) with the Hermitian symbol

    A = [[0,   xi1, xi2, kappa],
         [xi1, 0,   i,   0    ],
         [xi2, -i,  0,   0    ],
         [kappa, 0, 0,   0    ]].

The eigendecomposition is computed numerically per mode and cached per
grid; closed-form eigenvalues serve as the cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import EVEN, ODD, ScalarField, SlabGrid, VectorField
from .spectral import fft_coeffs, ifft_values

_PHASE_FLOOR = 1e-8


def assemble_symbol(xi, k) -> np.ndarray:
    """The Hermitian 4x4 symbol A(xi, k) acting on (s, V1, V2, V3) coefficients."""
    xi1, xi2 = float(xi[0]), float(xi[1])
    k = float(k)
    return np.array(
        [
            [0.0, xi1, xi2, k],
            [xi1, 0.0, 1j, 0.0],
            [xi2, -1j, 0.0, 0.0],
            [k, 0.0, 0.0, 0.0],
        ],
        dtype=complex,
    )


def eigenvalues_closed_form(xi, k):
    """Closed-form eigenvalues (lam1, -lam1, lam3, -lam3) of A(xi, k).

    Vectorized over arrays: `xi` may be a pair of arrays (xi1, xi2), `k` an
    array of matching shape.
    """
    xi1 = np.asarray(xi[0], dtype=float)
    xi2 = np.asarray(xi[1], dtype=float)
    k = np.asarray(k, dtype=float)
    r2 = xi1**2 + xi2**2
    s = 1.0 + r2 + k**2
    # provably >= 0 and cancellation-free in this grouping:
    # s^2 - 4k^2 = (1 + r2 - k^2)^2 + 4 r2 k^2
    rad = (1.0 + r2 - k**2) ** 2 + 4.0 * r2 * k**2
    root = np.sqrt(rad)
    lam1 = np.sqrt((s + root) / 2.0)
    # the product of the squared branch frequencies is exactly k^2, which
    # avoids the catastrophic cancellation in sqrt((s - root) / 2)
    lam3 = np.abs(k) / lam1
    return lam1, -lam1, lam3, -lam3


@dataclass
class EigenSystem:
    """Eigenvalues (lam1, -lam1, lam3, -lam3) and unitary Q with rows = eigenvectors."""

    eigenvalues: np.ndarray
    Q: np.ndarray


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the first component of each eigenvector (column) with modulus above
    the floor real and positive; deterministic across runs."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        v = out[:, j]
        idx = np.argmax(np.abs(v) > _PHASE_FLOOR)
        pivot = v[idx]
        if np.abs(pivot) > _PHASE_FLOOR:
            out[:, j] = v * (np.abs(pivot) / pivot)
    return out


def eigensystem(xi, k) -> EigenSystem:
    """Numeric Hermitian eigendecomposition of A(xi, k), sorted to the order
    (lam1, lam2, lam3, lam4) = (lam1, -lam1, lam3, -lam3)."""
    A = assemble_symbol(xi, k)
    w, v = np.linalg.eigh(A)  # ascending: (-lam1, -lam3, lam3, lam1)
    order = [3, 0, 2, 1]
    w = w[order]
    v = _fix_phases(v[:, order])
    return EigenSystem(eigenvalues=w, Q=v.conj().T)


class WavePropagator:
    """Cached per-grid diagonalization of the symbol; applies the exact group."""

    def __init__(self, grid: SlabGrid):
        self.grid = grid
        A = np.zeros((*grid.shape, 4, 4), dtype=complex)
        xi1 = grid.XI1 + np.zeros(grid.shape)
        xi2 = grid.XI2 + np.zeros(grid.shape)
        kap = grid.KAP + np.zeros(grid.shape)
        A[..., 0, 1] = xi1
        A[..., 1, 0] = xi1
        A[..., 0, 2] = xi2
        A[..., 2, 0] = xi2
        A[..., 0, 3] = kap
        A[..., 3, 0] = kap
        A[..., 1, 2] = 1j
        A[..., 2, 1] = -1j
        self.eigvals, self.eigvecs = np.linalg.eigh(A)

    def apply_exp(self, coeffs: np.ndarray, t: float, eps: float = 1.0) -> np.ndarray:
        """Apply exp(-i (t/eps) A) per mode to stacked coefficients (..., 4)."""
        if eps <= 0:
            raise ValueError("eps must be positive")
        z = np.einsum("...ji,...j->...i", self.eigvecs.conj(), coeffs)
        z = z * np.exp(-1j * (t / eps) * self.eigvals)
        return np.einsum("...ij,...j->...i", self.eigvecs, z)

    def apply_generator(self, coeffs: np.ndarray) -> np.ndarray:
        """Apply the generator B, i.e. multiply by iA per mode."""
        z = np.einsum("...ji,...j->...i", self.eigvecs.conj(), coeffs)
        z = z * (1j * self.eigvals)
        return np.einsum("...ij,...j->...i", self.eigvecs, z)


@dataclass
class WaveState:
    """The pair (s, V) in the slab symmetry class: s, V1, V2 even in x3, V3 odd."""

    s: ScalarField
    V: VectorField

    def __post_init__(self) -> None:
        if self.s.grid != self.V.grid:
            raise ValueError("s and V live on different grids")
        if self.V.ncomp != 3:
            raise ValueError("V must have three components")

    @property
    def grid(self) -> SlabGrid:
        return self.s.grid

    def to_coeffs(self) -> np.ndarray:
        g = self.grid
        return np.stack(
            [
                fft_coeffs(self.s.values, g),
                fft_coeffs(self.V.values[0], g),
                fft_coeffs(self.V.values[1], g),
                fft_coeffs(self.V.values[2], g),
            ],
            axis=-1,
        )

    @classmethod
    def from_coeffs(cls, grid: SlabGrid, coeffs: np.ndarray) -> "WaveState":
        s = ScalarField(grid, ifft_values(coeffs[..., 0], grid), EVEN)
        V = VectorField(
            grid,
            np.stack([ifft_values(coeffs[..., i], grid) for i in (1, 2, 3)]),
            (EVEN, EVEN, ODD),
        )
        return cls(s, V)

    def l2_norm(self) -> float:
        g = self.grid
        total = np.mean(self.s.values**2) + np.sum(np.mean(self.V.values**2, axis=(1, 2, 3)))
        return float(np.sqrt(g.measure * total))

    def sobolev_norm(self, m: int) -> float:
        g = self.grid
        sym = (1.0 + g.xi_sq + g.KAP**2) ** m
        c = self.to_coeffs()
        return float(np.sqrt(np.sum(sym[..., None] * np.abs(c) ** 2)))

    def sup_norms(self) -> tuple[float, float]:
        return float(np.max(np.abs(self.s.values))), float(np.max(np.abs(self.V.values)))


def propagate(
    state0: WaveState, t: float, eps: float = 1.0, propagator: WavePropagator | None = None
) -> WaveState:
    """Exact solution of the acoustic-Rossby system at time t."""
    prop = propagator if propagator is not None else WavePropagator(state0.grid)
    return WaveState.from_coeffs(state0.grid, prop.apply_exp(state0.to_coeffs(), t, eps))


def max_group_speed(grid: SlabGrid, samples: int = 2000) -> float:
    """Bound on the horizontal group speed max |d lam / d |xi||, estimated by
    central differences of the closed-form branches over the resolved modes."""
    r_max = float(np.sqrt(np.max(grid.xi_sq)))
    r = np.linspace(1e-4, max(r_max, 1.0), samples)
    h = r[1] - r[0]
    speed = 0.0
    kappas = np.unique(np.abs(grid.kappa))
    for k in kappas:
        l1p, _, l3p, _ = eigenvalues_closed_form((r + h, np.zeros_like(r)), np.full_like(r, k))
        l1m, _, l3m, _ = eigenvalues_closed_form((r - h, np.zeros_like(r)), np.full_like(r, k))
        speed = max(speed, np.max(np.abs(l1p - l1m)) / (2 * h), np.max(np.abs(l3p - l3m)) / (2 * h))
    return float(speed)


@dataclass
class DecayReport:
    """Time series of sup and L2 norms of a propagated state, with a log-log
    slope fit of the sup norm over the configured window."""

    times: np.ndarray
    sup_s: np.ndarray
    sup_V: np.ndarray
    l2_total: np.ndarray
    sobolev: dict = field(default_factory=dict)
    slope: float = np.nan
    fit_residual: float = np.nan
    fit_window: tuple[float, float] = (np.nan, np.nan)
    recurrence_time: float = np.inf
    beyond_recurrence: np.ndarray | None = None


def measure_decay(
    state0: WaveState,
    times,
    eps: float = 1.0,
    propagator: WavePropagator | None = None,
    fit_window: tuple[float, float] | None = None,
    sobolev_orders: tuple[int, ...] = (),
) -> DecayReport:
    """Propagate and record sup/L2 norms; fit the L-infinity decay rate.

    Times beyond the wrap-around horizon L / (2 * max group speed) are flagged,
    and excluded from the slope fit.
    """
    grid = state0.grid
    prop = propagator if propagator is not None else WavePropagator(grid)
    times = np.asarray(times, dtype=float)
    t_rec = grid.L / (2.0 * max_group_speed(grid))
    if fit_window is None:
        fit_window = (1.0, min(50.0, 0.8 * t_rec))

    coeffs0 = state0.to_coeffs()
    sup_s = np.empty_like(times)
    sup_V = np.empty_like(times)
    l2 = np.empty_like(times)
    sob = {m: np.empty_like(times) for m in sobolev_orders}
    for i, t in enumerate(times):
        st = WaveState.from_coeffs(grid, prop.apply_exp(coeffs0, t, eps))
        sup_s[i], sup_V[i] = st.sup_norms()
        l2[i] = st.l2_norm()
        for m in sobolev_orders:
            sob[m][i] = st.sobolev_norm(m)

    beyond = times > t_rec
    sup_all = np.maximum(sup_s, sup_V)
    lo, hi = fit_window
    sel = (times >= lo) & (times <= hi) & (times > 0) & ~beyond & (sup_all > 0)
    slope, resid = np.nan, np.nan
    if np.count_nonzero(sel) >= 2:
        lt = np.log(times[sel])
        ln = np.log(sup_all[sel])
        coef, res, *_ = np.polyfit(lt, ln, 1, full=True)
        slope = float(coef[0])
        resid = float(np.sqrt(res[0] / sel.sum())) if len(res) else 0.0
    return DecayReport(
        times=times,
        sup_s=sup_s,
        sup_V=sup_V,
        l2_total=l2,
        sobolev=sob,
        slope=slope,
        fit_residual=resid,
        fit_window=fit_window,
        recurrence_time=float(t_rec),
        beyond_recurrence=beyond,
    )
