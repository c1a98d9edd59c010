"""
Experiment configuration: a small sectioned key = value format, fully
validated before any allocation, with every error reported at once.

Example::

    [grid]
    L = 6.283185307179586
    Nx = 64
    Ny = 64
    Nz = 8

    [run]
    study = qg-run
    T = 10.0
    dt = 0.01
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

STUDIES = ("propagate", "decay", "project", "qg-run", "ns-run", "limit-study")
PRESETS = ("gaussian-vortex", "vortex-dipole", "random-band", "random-symmetric")


class ConfigError(ValueError):
    """Carries every parse and validation error, one per line."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        super().__init__("\n".join(errors))


@dataclass
class GridConfig:
    L: float = 2 * np.pi
    Nx: int = 64
    Ny: int = 64
    Nz: int = 8


@dataclass
class PhysicsConfig:
    gamma: float = 2.0
    eps: tuple[float, ...] = (0.2,)
    mu0: float = 1e-2
    alpha: float = 0.5
    forcing: str = "none"  # none | gaussian-hill
    forcing_amplitude: float = 1.0
    forcing_radius: float = 1.0


@dataclass
class DataConfig:
    preset: str = "gaussian-vortex"
    seed: int = 0
    amplitude: float = 1.0
    radius: float = 0.5
    separation: float = 1.5
    band_lo: float = 0.5
    band_hi: float = 3.0
    delta: tuple[float, ...] = (0.1,)


@dataclass
class RunConfig:
    study: str = "qg-run"
    T: float = 1.0
    dt: float = 0.01
    snapshot_stride: int = 0
    out: str = "out"
    # decay study extras
    t_lo: float = 1.0
    t_hi: float = 50.0
    n_times: int = 20
    cut_a: float = 0.3
    cut_a1: float = 0.45
    cut_b1: float = 1.0
    cut_b: float = 1.25
    vertical_modes: int = 1
    # limit-study extras
    window_W: float = 0.0
    window_t0: float = 0.0


@dataclass
class ExperimentConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    data: DataConfig = field(default_factory=DataConfig)
    run: RunConfig = field(default_factory=RunConfig)


_SECTIONS = {"grid": GridConfig, "physics": PhysicsConfig, "data": DataConfig, "run": RunConfig}

# keys parsed as tuples of floats
_LIST_KEYS = {("physics", "eps"), ("data", "delta")}


def _convert(raw: str, target_type, where: str, errors: list[str]):
    if target_type is float:
        try:
            return float(raw)
        except ValueError:
            errors.append(f"{where}: expected a number, got {raw!r}")
    elif target_type is int:
        try:
            return int(raw)
        except ValueError:
            errors.append(f"{where}: expected an integer, got {raw!r}")
    elif target_type is str:
        return raw
    else:  # tuple of floats
        try:
            vals = tuple(float(x) for x in raw.replace(",", " ").split())
            if not vals:
                raise ValueError
            return vals
        except ValueError:
            errors.append(f"{where}: expected a list of numbers, got {raw!r}")
    return None


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate; raises ConfigError listing all problems."""
    cfg = ExperimentConfig()
    errors: list[str] = []
    section: str | None = None
    known = {
        name: {f.name: f for f in fields(cls)} for name, cls in _SECTIONS.items()
    }

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            name = stripped[1:-1].strip()
            if name not in _SECTIONS:
                errors.append(f"line {lineno}: unknown section [{name}]")
                section = None
            else:
                section = name
            continue
        if "=" not in stripped:
            errors.append(f"line {lineno}: expected key = value, got {stripped!r}")
            continue
        if section is None:
            errors.append(f"line {lineno}: key outside any known section")
            continue
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in known[section]:
            errors.append(f"line {lineno}: unknown key {key!r} in section [{section}]")
            continue
        where = f"line {lineno}: [{section}] {key}"
        if (section, key) in _LIST_KEYS:
            target = tuple
        else:
            target = type(getattr(getattr(cfg, section), key))
        val = _convert(raw, target, where, errors)
        if val is not None:
            setattr(getattr(cfg, section), key, val)

    errors.extend(validate(cfg))
    if errors:
        raise ConfigError(errors)
    return cfg


def validate(cfg: ExperimentConfig) -> list[str]:
    errors: list[str] = []
    g, ph, d, r = cfg.grid, cfg.physics, cfg.data, cfg.run

    if g.L <= 0:
        errors.append("grid.L must be positive")
    for name in ("Nx", "Ny", "Nz"):
        n = getattr(g, name)
        if n < 4 or n % 2:
            errors.append(f"grid.{name} must be an even integer >= 4, got {n}")

    if ph.gamma <= 1.5:
        errors.append(f"physics.gamma must exceed 3/2, got {ph.gamma}")
    if any(e <= 0 for e in ph.eps):
        errors.append("physics.eps entries must be positive")
    if ph.mu0 < 0:
        errors.append("physics.mu0 must be non-negative")
    if ph.forcing not in ("none", "gaussian-hill"):
        errors.append(f"physics.forcing must be none or gaussian-hill, got {ph.forcing!r}")

    if d.preset not in PRESETS:
        errors.append(f"data.preset must be one of {PRESETS}, got {d.preset!r}")
    if any(dl <= 0 for dl in d.delta):
        errors.append("data.delta entries must be positive")
    if not 0 < d.band_lo < d.band_hi:
        errors.append("data band must satisfy 0 < band_lo < band_hi")

    if r.study not in STUDIES:
        errors.append(f"run.study must be one of {STUDIES}, got {r.study!r}")
    if r.T <= 0:
        errors.append("run.T must be positive")
    if r.dt <= 0:
        errors.append("run.dt must be positive")
    if r.snapshot_stride < 0:
        errors.append("run.snapshot_stride must be non-negative")
    if not 0 < r.t_lo < r.t_hi:
        errors.append("decay window must satisfy 0 < t_lo < t_hi")
    if not 0 < r.cut_a < r.cut_a1 < r.cut_b1 < r.cut_b:
        errors.append("cutoff must satisfy 0 < cut_a < cut_a1 < cut_b1 < cut_b")
    return errors


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def render_config(cfg: ExperimentConfig) -> str:
    """Echo a config verbatim as sectioned key = value text."""
    chunks = []
    for name in _SECTIONS:
        sec = getattr(cfg, name)
        lines = [f"[{name}]"]
        for f in fields(sec):
            val = getattr(sec, f.name)
            if isinstance(val, tuple):
                val = " ".join(repr(v) for v in val)
            lines.append(f"{f.name} = {val}")
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"
