"""
The acceptance suite: nine numbered invariant checks with pinned tolerances.

Each check returns a CheckResult; `run_selftest` executes any subset and
prints one pass/fail line per criterion. The same functions back the CLI
`selftest` subcommand and the pytest acceptance tests, so the gate cannot
drift between the two entry points.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import qg
from .cutoffs import CutoffSpec
from .diagnostics import CompareWindow, convergence_report, uniform_bound_monitor
from .grid import EVEN, ODD, ScalarField, VectorField, make_grid
from .initial import gaussian_vortex, random_symmetric_state, vortex_dipole
from .kernel import kernel_inner_product, kernel_wave_state, project_to_kernel
from .ns import NSSolver, PressureLaw, run_ns
from .spectral import fft_coeffs, ifft_values
from .waves import (
    WavePropagator,
    WaveState,
    assemble_symbol,
    eigenvalues_closed_form,
    measure_decay,
    propagate,
)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    elapsed: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number}. {self.name}: {self.detail} ({self.elapsed:.1f} s)"


def check_eigenvalue_oracle(seed: int = 7) -> CheckResult:
    """Closed-form branch frequencies vs a dense Hermitian eigensolve."""
    rng = np.random.default_rng(seed)
    n = 10_000
    xi = rng.uniform(-50 / np.sqrt(2), 50 / np.sqrt(2), size=(2, n))
    k = rng.uniform(-10 * np.pi, 10 * np.pi, size=n)
    l1, l2, l3, l4 = eigenvalues_closed_form((xi[0], xi[1]), k)
    closed = np.sort(np.stack([l1, l2, l3, l4], axis=-1), axis=-1)
    A = np.empty((n, 4, 4), dtype=complex)
    for i in range(n):
        A[i] = assemble_symbol((xi[0, i], xi[1, i]), k[i])
    numeric = np.linalg.eigvalsh(A)
    err = float(np.max(np.abs(closed - numeric)))
    return CheckResult(1, "eigenvalue oracle", err < 1e-10, f"max abs error {err:.3e} (tol 1e-10)")


def check_isometry(seed: int = 11) -> CheckResult:
    """The propagator is unitary on L2 and on the second Sobolev norm."""
    grid = make_grid(2 * np.pi, 256, 256, 8)
    r, U = random_symmetric_state(grid, seed=seed, amplitude=1.0, band=(0.5, 20.0))
    state = WaveState(r, U)
    prop = WavePropagator(grid)
    l2_0 = state.l2_norm()
    h2_0 = state.sobolev_norm(2)
    worst = 0.0
    for t in (0.1, 1.0, np.pi, 7.3, 10.0):
        st = propagate(state, t, propagator=prop)
        worst = max(worst, abs(st.l2_norm() - l2_0) / l2_0, abs(st.sobolev_norm(2) - h2_0) / h2_0)
    return CheckResult(2, "propagator isometry", worst < 1e-10, f"max rel drift {worst:.3e} (tol 1e-10)")


def check_ode_oracle(seed: int = 13) -> CheckResult:
    """Per-mode propagator vs adaptive integration of y' = -(i/eps) A y."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    eps = 1.0
    for _ in range(100):
        xi = rng.uniform(-8, 8, size=2)
        k = np.pi * rng.integers(-3, 4)
        A = assemble_symbol((xi[0], xi[1]), float(k))
        y0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        t1 = rng.uniform(0.5, 3.0)

        def rhs(t, y):
            z = (-1j / eps) * (A @ (y[:4] + 1j * y[4:]))
            return np.concatenate([z.real, z.imag])

        sol = solve_ivp(rhs, (0.0, t1), np.concatenate([y0.real, y0.imag]),
                        rtol=1e-12, atol=1e-12, method="DOP853")
        y_ode = sol.y[:4, -1] + 1j * sol.y[4:, -1]
        w, Q = np.linalg.eigh(A)
        y_exact = Q @ (np.exp(-1j * t1 / eps * w) * (Q.conj().T @ y0))
        worst = max(worst, float(np.max(np.abs(y_exact - y_ode))))
    return CheckResult(3, "propagator vs ODE oracle", worst < 1e-8, f"max abs error {worst:.3e} (tol 1e-8)")


def check_dispersive_decay() -> CheckResult:
    """Sup-norm decay of frequency-localized, kernel-orthogonal data."""
    grid = make_grid(200 * np.pi, 512, 512, 4)
    spec = CutoffSpec(a=0.3, a1=0.45, b1=1.0, b=1.25, R=100.0, w=50.0, K=1)
    prop = WavePropagator(grid)

    # radial wave packet carried by the first vertical modes: automatically
    # orthogonal to the kernel (which lives at vertical mode zero), then
    # restricted to the fast branch pair for a clean single-speed signal
    coeffs = np.zeros((*grid.shape, 4), dtype=complex)
    psi = spec.psi(np.sqrt(grid.plane.xi_sq))
    coeffs[:, :, 1, 0] = psi
    coeffs[:, :, -1, 0] = psi
    z = np.einsum("...ji,...j->...i", prop.eigvecs.conj(), coeffs)
    z[..., 1] = 0.0
    z[..., 2] = 0.0
    state = WaveState.from_coeffs(grid, np.einsum("...ij,...j->...i", prop.eigvecs, z))

    times = np.concatenate([[0.0], np.geomspace(1.0, 50.0, 20)])
    rep = measure_decay(state, times, 1.0, prop, fit_window=(1.0, 50.0))
    l2_drift = float(np.max(np.abs(rep.l2_total - rep.l2_total[0])) / rep.l2_total[0])
    ok = -0.65 <= rep.slope <= -0.35 and l2_drift < 1e-10
    detail = f"slope {rep.slope:.3f} (window [-0.65, -0.35]), L2 drift {l2_drift:.3e} (tol 1e-10)"
    return CheckResult(4, "dispersive decay", bool(ok), detail)


def check_kernel_projection(seed: int = 17) -> CheckResult:
    """Projection is idempotent and orthogonal; kernel states are stationary."""
    grid = make_grid(2 * np.pi, 64, 64, 8)
    r, U = random_symmetric_state(grid, seed=seed, band=(0.5, 8.0))
    kp = project_to_kernel(r, U)

    # idempotence: re-project the embedded projection
    emb = kernel_wave_state(kp, grid)
    kp2 = project_to_kernel(emb.s, emb.V)
    scale = max(np.max(np.abs(kp.q.values)), 1e-30)
    idem = max(
        np.max(np.abs(kp2.q.values - kp.q.values)),
        np.max(np.abs(kp2.v.values - kp.v.values)),
    ) / scale

    # orthogonality: the residual is L2-orthogonal to the projection itself
    res_r = ScalarField(grid, r.values - emb.s.values, EVEN)
    res_U = VectorField(grid, U.values - emb.V.values, (EVEN, EVEN, ODD))
    ortho = abs(kernel_inner_product(res_r, res_U, kp)) / max(emb.l2_norm() ** 2, 1e-30)

    # stationarity under the wave propagator
    prop = WavePropagator(grid)
    drift = 0.0
    for t in (1.0, 5.5, 10.0):
        moved = propagate(emb, t, propagator=prop)
        drift = max(
            drift,
            np.max(np.abs(moved.s.values - emb.s.values)),
            np.max(np.abs(moved.V.values - emb.V.values)),
        )
    drift /= scale
    worst = max(idem, ortho, drift)
    ok = worst < 1e-10
    detail = f"idempotence {idem:.3e}, orthogonality {ortho:.3e}, stationarity {drift:.3e} (tol 1e-10)"
    return CheckResult(5, "kernel projection", bool(ok), detail)


def check_qg_conservation() -> CheckResult:
    """Energy and potential-vorticity norms conserved; radial vortex steady."""
    grid = make_grid(2 * np.pi, 256, 256, 8).plane
    q0 = vortex_dipole(grid, amplitude=1.0, radius=0.5, separation=1.5)
    traj = qg.run_qg(q0, T=10.0, dt=0.01, cfl=0.5)
    e_drift = float(np.max(np.abs(traj.energy - traj.energy[0])) / traj.energy[0])
    p_drift = float(np.max(np.abs(traj.p_l2 - traj.p_l2[0])) / traj.p_l2[0])

    radial = gaussian_vortex(grid, amplitude=1.0, radius=0.5)
    tend = qg.qg_rhs(radial)
    scale = np.max(np.abs(qg.helmholtz(radial).values))
    steady = float(np.max(np.abs(tend.values)) / scale)

    ok = e_drift < 1e-6 and p_drift < 1e-6 and steady < 1e-8
    detail = (
        f"energy drift {e_drift:.3e}, |P| drift {p_drift:.3e} (tol 1e-6), "
        f"radial tendency {steady:.3e} (tol 1e-8)"
    )
    return CheckResult(6, "QG conservation", bool(ok), detail)


def _reference_ns(eps: float, T: float, dt: float, amplitude: float, snapshot_stride: int = 0):
    grid = make_grid(2 * np.pi, 64, 64, 8)
    law = PressureLaw(2.0)
    # viscosity vanishing linearly in eps keeps the viscous mismatch with the
    # inviscid limit equation at the same O(eps) rate as the wave error
    mu = 1e-2 * eps
    solver = NSSolver(grid, eps=eps, mu=mu, law=law)
    plane = grid.plane
    q0 = gaussian_vortex(plane, amplitude=amplitude, radius=0.7)
    kp = project_to_kernel(
        ScalarField(grid, np.broadcast_to(q0.values[..., None], grid.shape).copy(), EVEN),
        VectorField(grid, np.zeros((3, *grid.shape)), (EVEN, EVEN, ODD)),
    )
    ones = np.ones(grid.Nz)
    sigma0 = ScalarField(grid, kp.q.values[..., None] * ones, EVEN)
    u0 = VectorField(
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
    traj = run_ns(solver, sigma0, u0, T=T, dt=dt, snapshot_stride=snapshot_stride)
    return traj, kp


def check_energy_inequality() -> CheckResult:
    """Discrete energy balance of the reference compressible run."""
    traj, _ = _reference_ns(eps=0.2, T=1.0, dt=2e-3, amplitude=0.1)
    res = traj.energy_residual()
    rate = float(np.max(np.abs(res)) / traj.energy[0] / max(traj.times[-1], 1e-30))
    ok = rate <= 1e-6 and not traj.invalid
    return CheckResult(7, "energy inequality", bool(ok), f"residual rate {rate:.3e} x E0 per unit time (tol 1e-6)")


def check_singular_limit() -> CheckResult:
    """Convergence to the QG limit along an eps sweep, with uniform monitors."""
    eps_list = (0.4, 0.2, 0.1, 0.05)
    amplitude = 0.1
    T, dt = 1.0, 2e-3
    trajs = []
    for eps in eps_list:
        traj, kp = _reference_ns(eps=eps, T=T, dt=dt, amplitude=amplitude, snapshot_stride=50)
        trajs.append(traj)

    plane = trajs[0].grid.plane
    q0 = ScalarField(plane, kp.q.values)
    qg_traj = qg.run_qg(q0, T=T, dt=1e-3, snapshot_stride=100)
    window = CompareWindow(W=plane.L, t0=0.0)
    rep = convergence_report(trajs, qg_traj, window)
    errs = np.array([max(e.sigma_l2, e.velocity_l2) for e in rep.entries])
    decreasing = bool(np.all(np.diff(errs) < 0))
    ratio = errs[-1] / errs[0]

    mon = uniform_bound_monitor(trajs)
    exp_ok = mon.residual_exponent >= 1.5
    ok = decreasing and ratio < 1 / 3 and mon.ratios_bounded and exp_ok
    detail = (
        f"errors {np.array2string(errs, precision=3)} strictly decreasing: {decreasing}, "
        f"finest/coarsest {ratio:.3f} (< 1/3), monitors bounded: {mon.ratios_bounded}, "
        f"residual exponent {mon.residual_exponent:.2f} (>= 1.5)"
    )
    return CheckResult(8, "singular limit sweep", bool(ok), detail)


def check_pressure_identities(seed: int = 23) -> CheckResult:
    """gamma = 2 closed forms and the free-energy curvature identity."""
    law = PressureLaw(2.0)
    rng = np.random.default_rng(seed)
    sigma = rng.uniform(-0.9, 0.9, size=200)
    eps = 0.3
    rho = 1.0 + eps * sigma

    worst12 = float(np.max(np.abs(law.pressure_remainder(sigma, eps) - sigma**2 / 2)))
    free = law.H(rho) - law.dH(1.0) * (rho - 1.0) - law.H(1.0)
    worst12 = max(worst12, float(np.max(np.abs(free - (rho - 1.0) ** 2 / 2))))

    worst_fd = 0.0
    h = 1e-3
    for gamma in (1.7, 2.0, 3.1):
        lawg = PressureLaw(gamma)
        r = rng.uniform(0.5, 2.0, size=50)
        d2H = (
            -lawg.H(r + 2 * h) + 16 * lawg.H(r + h) - 30 * lawg.H(r)
            + 16 * lawg.H(r - h) - lawg.H(r - 2 * h)
        ) / (12 * h**2)
        worst_fd = max(worst_fd, float(np.max(np.abs(d2H - lawg.dp(r) / r))))

    ok = worst12 < 1e-12 and worst_fd < 1e-8
    detail = f"closed-form error {worst12:.3e} (tol 1e-12), H'' vs p'/rho {worst_fd:.3e} (tol 1e-8)"
    return CheckResult(9, "pressure identities", bool(ok), detail)


CHECKS = {
    1: check_eigenvalue_oracle,
    2: check_isometry,
    3: check_ode_oracle,
    4: check_dispersive_decay,
    5: check_kernel_projection,
    6: check_qg_conservation,
    7: check_energy_inequality,
    8: check_singular_limit,
    9: check_pressure_identities,
}


def run_selftest(numbers=None, echo=print) -> list[CheckResult]:
    """Run the numbered checks (all by default) and report one line each."""
    numbers = sorted(numbers) if numbers else sorted(CHECKS)
    results = []
    for n in numbers:
        t0 = time.perf_counter()
        res = CHECKS[n]()
        res.elapsed = time.perf_counter() - t0
        results.append(res)
        echo(res.line())
    return results
