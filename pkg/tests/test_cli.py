import numpy as np
import pytest

from rotwave.cli import main
from rotwave.fieldio import read_csv, read_field, read_sidecar

SMALL_QG = """
[grid]
L = 6.283185307179586
Nx = 32
Ny = 32
Nz = 4

[data]
preset = vortex-dipole
amplitude = 0.5
radius = 0.8

[run]
study = qg-run
T = 0.2
dt = 0.02
snapshot_stride = 5
"""

SMALL_NS = """
[grid]
L = 6.283185307179586
Nx = 16
Ny = 16
Nz = 4

[physics]
gamma = 2.0
eps = 0.2
mu0 = 1e-2
alpha = 1.0

[data]
preset = gaussian-vortex
amplitude = 0.1
radius = 0.8

[run]
study = ns-run
T = 0.05
dt = 0.005
"""


def _write(tmp_path, text, name="exp.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_qg_run_outputs(tmp_path):
    cfg = _write(tmp_path, SMALL_QG)
    out = tmp_path / "out"
    assert main(["qg-run", "--config", str(cfg), "--out", str(out)]) == 0
    series = read_csv(out / "conservation.csv")
    assert {"t", "energy", "p_l2"} <= set(series)
    assert (out / "MANIFEST").exists()
    assert (out / "config.txt").exists()
    snaps = sorted(out.glob("q_t*.rwl"))
    assert snaps
    q = read_field(snaps[0])
    assert q.shape == (32, 32)


def test_same_config_same_manifest(tmp_path):
    cfg = _write(tmp_path, SMALL_QG)
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    main(["qg-run", "--config", str(cfg), "--out", str(out1)])
    main(["qg-run", "--config", str(cfg), "--out", str(out2)])
    assert (out1 / "MANIFEST").read_text() == (out2 / "MANIFEST").read_text()


def test_invalid_config_exit_code(tmp_path, capsys):
    cfg = _write(tmp_path, SMALL_QG.replace("Nx = 32", "Nx = 7"))
    assert main(["qg-run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "config error" in capsys.readouterr().err


def test_ns_run_outputs(tmp_path):
    cfg = _write(tmp_path, SMALL_NS)
    out = tmp_path / "out"
    assert main(["ns-run", "--config", str(cfg), "--out", str(out)]) == 0
    series = read_csv(out / "series.csv")
    assert {"t", "energy", "dissipation", "mass", "energy_residual"} <= set(series)
    sigma = read_field(out / "sigma_final.rwl")
    assert sigma.shape == (16, 16, 4)


def test_decay_study_outputs(tmp_path):
    cfg = _write(
        tmp_path,
        """
[grid]
L = 62.83185307179586
Nx = 64
Ny = 64
Nz = 4

[run]
study = decay
T = 8.0
t_lo = 1.0
t_hi = 8.0
n_times = 6
""",
    )
    out = tmp_path / "out"
    assert main(["decay-study", "--config", str(cfg), "--out", str(out)]) == 0
    series = read_csv(out / "decay.csv")
    assert {"t", "sup_s", "sup_V", "l2_total"} <= set(series)
    meta = read_sidecar(out / "decay.meta.json")
    assert "slope" in meta and "recurrence_time" in meta
    # the L2 column of the exact propagator is constant
    l2 = series["l2_total"]
    assert np.max(np.abs(l2 - l2[0])) < 1e-10 * l2[0]


def test_interrupted_run_flags_incomplete(tmp_path, monkeypatch):
    cfg = _write(tmp_path, SMALL_QG)
    out = tmp_path / "out"

    import rotwave.cli as cli_mod

    def boom(*args, **kwargs):
        raise KeyboardInterrupt

    monkeypatch.setitem(cli_mod._RUNNERS, "qg-run", boom)
    with pytest.raises(KeyboardInterrupt):
        main(["qg-run", "--config", str(cfg), "--out", str(out)])
    assert "INCOMPLETE" in (out / "MANIFEST").read_text()


def test_seed_override_changes_random_data(tmp_path):
    cfg = _write(
        tmp_path,
        SMALL_NS.replace("preset = gaussian-vortex", "preset = random-symmetric")
        .replace("study = ns-run", "study = propagate"),
    )
    outs = []
    for seed in (1, 2):
        out = tmp_path / f"o{seed}"
        assert main(["propagate", "--config", str(cfg), "--out", str(out), "--seed", str(seed)]) == 0
        outs.append(read_field(out / "s.rwl"))
    assert not np.array_equal(outs[0], outs[1])
