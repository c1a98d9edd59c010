"""
Command line entry point: experiment orchestration with reproducible,
hashed artifact directories.

Every run echoes its config verbatim into the output directory and finishes
by writing a MANIFEST of content hashes; partial outputs from an interrupted
run are flagged INCOMPLETE there.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import qg
from .config import ConfigError, ExperimentConfig, load_config, render_config
from .cutoffs import CutoffSpec
from .diagnostics import CompareWindow, convergence_report, uniform_bound_monitor
from .fieldio import read_field, write_csv, write_field, write_manifest, write_sidecar
from .grid import EVEN, ODD, ScalarField, SlabGrid, VectorField, make_grid
from .initial import (
    gaussian_vortex,
    random_band_limited,
    random_symmetric_state,
    vortex_dipole,
)
from .kernel import decompose_initial_data, kernel_inner_product, project_to_kernel
from .ns import NSSolver, PressureLaw, gaussian_hill_potential, run_ns
from .waves import WavePropagator, WaveState, measure_decay, propagate


def _slab(cfg: ExperimentConfig) -> SlabGrid:
    g = cfg.grid
    return make_grid(g.L, g.Nx, g.Ny, g.Nz)


def _plane_q0(cfg: ExperimentConfig) -> ScalarField:
    d = cfg.data
    plane = _slab(cfg).plane
    if d.preset == "gaussian-vortex":
        return gaussian_vortex(plane, d.amplitude, d.radius)
    if d.preset == "vortex-dipole":
        return vortex_dipole(plane, d.amplitude, d.radius, d.separation)
    return random_band_limited(plane, d.seed, d.amplitude, (d.band_lo, d.band_hi))


def _slab_data(cfg: ExperimentConfig) -> tuple[ScalarField, VectorField]:
    d = cfg.data
    grid = _slab(cfg)
    if d.preset == "random-symmetric":
        return random_symmetric_state(
            grid, d.seed, d.amplitude, (d.band_lo, d.band_hi), cfg.run.vertical_modes
        )
    q0 = _plane_q0(cfg)
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
    return sigma0, u0


def run_propagate(cfg: ExperimentConfig, out: Path) -> None:
    r, U = _slab_data(cfg)
    state = WaveState(r, U)
    eps = cfg.physics.eps[0]
    moved = propagate(state, cfg.run.T, eps)
    for name, vals in (
        ("s", moved.s.values),
        ("V1", moved.V.values[0]),
        ("V2", moved.V.values[1]),
        ("V3", moved.V.values[2]),
    ):
        write_field(out / f"{name}.rwl", vals)
    write_csv(
        out / "norms.csv",
        {
            "t": np.array([0.0, cfg.run.T]),
            "l2": np.array([state.l2_norm(), moved.l2_norm()]),
            "sup_s": np.array([state.sup_norms()[0], moved.sup_norms()[0]]),
            "sup_V": np.array([state.sup_norms()[1], moved.sup_norms()[1]]),
        },
    )


def decay_state(cfg: ExperimentConfig) -> tuple[WaveState, WavePropagator]:
    """Frequency-localized, kernel-orthogonal wave packet on the fast branch."""
    r = cfg.run
    grid = _slab(cfg)
    spec = CutoffSpec(
        a=r.cut_a, a1=r.cut_a1, b1=r.cut_b1, b=r.cut_b,
        R=2 * r.cut_b, w=r.cut_b, K=max(r.vertical_modes, 1),
    )
    prop = WavePropagator(grid)
    coeffs = np.zeros((*grid.shape, 4), dtype=complex)
    psi = spec.psi(np.sqrt(grid.plane.xi_sq))
    coeffs[:, :, 1, 0] = psi
    coeffs[:, :, -1, 0] = psi
    z = np.einsum("...ji,...j->...i", prop.eigvecs.conj(), coeffs)
    z[..., 1] = 0.0
    z[..., 2] = 0.0
    state = WaveState.from_coeffs(grid, np.einsum("...ij,...j->...i", prop.eigvecs, z))
    return state, prop


def run_decay(cfg: ExperimentConfig, out: Path) -> None:
    r = cfg.run
    state, prop = decay_state(cfg)
    times = np.concatenate([[0.0], np.geomspace(r.t_lo, r.t_hi, r.n_times)])
    rep = measure_decay(state, times, cfg.physics.eps[0], prop, fit_window=(r.t_lo, r.t_hi))
    write_csv(
        out / "decay.csv",
        {"t": rep.times, "sup_s": rep.sup_s, "sup_V": rep.sup_V, "l2_total": rep.l2_total},
    )
    write_sidecar(
        out / "decay.meta.json",
        {
            "slope": rep.slope,
            "fit_residual": rep.fit_residual,
            "fit_window": list(rep.fit_window),
            "recurrence_time": rep.recurrence_time,
            "empty_window": bool(np.isnan(rep.slope)),
        },
    )


def run_project(cfg: ExperimentConfig, out: Path, in_dir: Path | None) -> None:
    grid = _slab(cfg)
    if in_dir is not None:
        r = ScalarField(grid, read_field(in_dir / "r.rwl"), EVEN)
        U = VectorField(
            grid,
            np.stack([read_field(in_dir / f"u{i}.rwl") for i in (1, 2, 3)]),
            (EVEN, EVEN, ODD),
        )
    else:
        r, U = _slab_data(cfg)
    spec = CutoffSpec.from_delta(cfg.data.delta[0])
    split = decompose_initial_data(r, U, spec, cfg.data.delta[0])
    write_field(out / "q0.rwl", split.q0.values)
    write_field(out / "v0_1.rwl", split.v0.values[0])
    write_field(out / "v0_2.rwl", split.v0.values[1])
    write_field(out / "s0.rwl", split.s0.values)
    for i in range(3):
        write_field(out / f"V0_{i + 1}.rwl", split.V0.values[i])
    inner = kernel_inner_product(split.s0, split.V0, split.kernel_pair)
    write_csv(
        out / "orthogonality.csv",
        {
            "delta": np.array([split.delta]),
            "inner_product": np.array([inner]),
            "kernel_l2": np.array([np.sqrt(max(kernel_inner_product(
                ScalarField(grid, np.broadcast_to(split.q0.values[..., None], grid.shape).copy(), EVEN),
                VectorField(grid, np.stack([
                    np.broadcast_to(split.v0.values[0][..., None], grid.shape).copy(),
                    np.broadcast_to(split.v0.values[1][..., None], grid.shape).copy(),
                    np.zeros(grid.shape),
                ]), (EVEN, EVEN, ODD)),
                split.kernel_pair,
            ), 0.0))]),
        },
    )


def run_qg_cmd(cfg: ExperimentConfig, out: Path) -> None:
    q0 = _plane_q0(cfg)
    traj = qg.run_qg(
        q0, cfg.run.T, cfg.run.dt, snapshot_stride=cfg.run.snapshot_stride
    )
    write_csv(
        out / "conservation.csv",
        {
            "t": traj.times,
            "energy": traj.energy,
            "p_l2": traj.p_l2,
            "tail_fraction": traj.tail_fraction,
        },
    )
    for t, snap in zip(traj.snapshot_times, traj.snapshots):
        write_field(out / f"q_t{t:08.3f}.rwl", snap)
    write_sidecar(
        out / "qg.meta.json",
        {"under_resolved": traj.under_resolved, "aborted": traj.aborted},
    )
    if traj.aborted:
        raise RuntimeError("QG run aborted on non-finite values")


def _ns_solver(cfg: ExperimentConfig, eps: float) -> NSSolver:
    grid = _slab(cfg)
    ph = cfg.physics
    law = PressureLaw(ph.gamma)
    mu = ph.mu0 * eps**ph.alpha
    G = None
    if ph.forcing == "gaussian-hill":
        G = gaussian_hill_potential(grid, ph.forcing_amplitude, ph.forcing_radius)
    return NSSolver(grid, eps=eps, mu=mu, law=law, G=G)


def _write_ns_traj(traj, out: Path) -> None:
    write_csv(
        out / "series.csv",
        {
            "t": traj.times,
            "energy": traj.energy,
            "dissipation": traj.dissipation,
            "forcing_power": traj.forcing_power,
            "mass": traj.mass,
            "sqrt_rho_u_l2": traj.sqrt_rho_u_l2,
            "sigma_ess_l2": traj.sigma_ess_l2,
            "residual_rho": traj.residual_rho,
            "residual_one": traj.residual_one,
            "energy_residual": traj.energy_residual(),
            "symmetry_defect": traj.symmetry_defect,
        },
    )
    sigma, m = traj.snapshots[-1]
    write_field(out / "sigma_final.rwl", sigma)
    for i in range(3):
        write_field(out / f"m{i + 1}_final.rwl", m[i])


def run_ns_cmd(cfg: ExperimentConfig, out: Path) -> None:
    eps = cfg.physics.eps[0]
    solver = _ns_solver(cfg, eps)
    sigma0, u0 = _slab_data(cfg)
    traj = run_ns(
        solver, sigma0, u0, cfg.run.T, cfg.run.dt, snapshot_stride=cfg.run.snapshot_stride
    )
    _write_ns_traj(traj, out)
    if traj.invalid:
        raise RuntimeError("compressible run produced non-finite values")


def run_limit_study(cfg: ExperimentConfig, out: Path) -> None:
    sigma0, u0 = _slab_data(cfg)
    stride = cfg.run.snapshot_stride or max(int(round(cfg.run.T / cfg.run.dt)) // 10, 1)
    trajs = []
    for eps in cfg.physics.eps:
        sub = out / f"eps_{eps:g}"
        sub.mkdir(parents=True, exist_ok=True)
        solver = _ns_solver(cfg, eps)
        traj = run_ns(solver, sigma0, u0, cfg.run.T, cfg.run.dt, snapshot_stride=stride)
        _write_ns_traj(traj, sub)
        trajs.append(traj)

    plane = _slab(cfg).plane
    q0 = ScalarField(plane, sigma0.values.mean(axis=-1))
    qg_traj = qg.run_qg(q0, cfg.run.T, cfg.run.dt / 2, snapshot_stride=2 * stride)
    qg_dir = out / "qg"
    qg_dir.mkdir(parents=True, exist_ok=True)
    write_csv(
        qg_dir / "conservation.csv",
        {"t": qg_traj.times, "energy": qg_traj.energy, "p_l2": qg_traj.p_l2},
    )

    W = cfg.run.window_W if cfg.run.window_W > 0 else cfg.grid.L
    rep = convergence_report(trajs, qg_traj, CompareWindow(W=W, t0=cfg.run.window_t0))
    write_csv(
        out / "summary.csv",
        {
            "eps": rep.eps,
            "sigma_l2": np.array([e.sigma_l2 for e in rep.entries]),
            "sigma_l1": np.array([e.sigma_l1 for e in rep.entries]),
            "velocity_l2": np.array([e.velocity_l2 for e in rep.entries]),
            "velocity_l1": np.array([e.velocity_l1 for e in rep.entries]),
        },
    )
    mon = uniform_bound_monitor(trajs)
    write_sidecar(
        out / "summary.meta.json",
        {
            "order_sigma": rep.order_sigma,
            "order_velocity": rep.order_velocity,
            "monitors_bounded": mon.ratios_bounded,
            "residual_exponent": mon.residual_exponent,
            "notes": mon.notes,
        },
    )


_RUNNERS = {
    "propagate": run_propagate,
    "decay": run_decay,
    "qg-run": run_qg_cmd,
    "ns-run": run_ns_cmd,
    "limit-study": run_limit_study,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rotwave", description="rotating compressible flow experiments"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("propagate", "decay-study", "project", "qg-run", "ns-run", "limit-study"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="experiment config path")
        p.add_argument("--out", default=None, help="output directory (default from config)")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=None, help="override data.seed")
        if name == "project":
            p.add_argument("--in", dest="in_dir", default=None, help="directory of field dumps")
    p = sub.add_parser("selftest")
    p.add_argument("--only", type=int, nargs="*", default=None, help="criterion numbers to run")
    args = parser.parse_args(argv)

    if args.command == "selftest":
        from .selftest import run_selftest

        results = run_selftest(args.only)
        return 0 if all(r.passed for r in results) else 1

    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        for err in exc.errors:
            print(f"config error: {err}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2

    if args.seed is not None:
        cfg.data.seed = args.seed

    import threadpoolctl

    out = Path(args.out if args.out else cfg.run.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(render_config(cfg))

    study = "decay" if args.command == "decay-study" else args.command
    completed = False
    try:
        with threadpoolctl.threadpool_limits(limits=max(args.threads, 1)):
            if study == "project":
                in_dir = Path(args.in_dir) if args.in_dir else None
                run_project(cfg, out, in_dir)
            else:
                _RUNNERS[study](cfg, out)
        completed = True
    finally:
        write_manifest(out, incomplete=not completed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
