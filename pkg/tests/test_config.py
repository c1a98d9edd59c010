import numpy as np
import pytest

from rotwave.config import ConfigError, parse_config, render_config

MINIMAL = """
[grid]
L = 3.14
Nx = 32
Ny = 32
Nz = 4

[run]
study = decay
T = 50.0
dt = 1.0
"""


def test_minimal_config_populates_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.grid.Nx == 32
    assert cfg.run.study == "decay"
    # untouched sections keep their defaults
    assert cfg.physics.gamma == 2.0
    assert cfg.data.preset == "gaussian-vortex"


def test_gamma_below_three_halves_rejected():
    with pytest.raises(ConfigError, match="3/2"):
        parse_config(MINIMAL + "\n[physics]\ngamma = 1.2\n")


def test_odd_grid_size_rejected():
    bad = MINIMAL.replace("Nx = 32", "Nx = 33")
    with pytest.raises(ConfigError, match="even"):
        parse_config(bad)


def test_all_errors_reported_at_once():
    bad = """
[grid]
Nx = 33
L = -1

[physics]
gamma = 1.0

[nonsense]
x = 1
"""
    with pytest.raises(ConfigError) as exc:
        parse_config(bad)
    errors = exc.value.errors
    assert len(errors) >= 4
    assert any("Nx" in e for e in errors)
    assert any("gamma" in e for e in errors)
    assert any("[nonsense]" in e for e in errors)


def test_errors_carry_line_numbers():
    bad = MINIMAL + "\n[physics]\ngamma = squishy\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(bad)
    assert any(e.startswith("line ") for e in exc.value.errors)


def test_unknown_key_rejected_with_location():
    bad = MINIMAL + "\n[grid]\nwavelength = 2\n"
    with pytest.raises(ConfigError, match=r"unknown key 'wavelength'"):
        parse_config(bad)


def test_eps_list_parsing():
    cfg = parse_config(MINIMAL + "\n[physics]\neps = 0.4 0.2 0.1\n")
    assert cfg.physics.eps == (0.4, 0.2, 0.1)


def test_comments_and_blank_lines_ignored():
    cfg = parse_config("# header\n" + MINIMAL + "\n# trailing comment\n")
    assert cfg.grid.Nz == 4


def test_render_parse_roundtrip():
    cfg = parse_config(MINIMAL + "\n[physics]\neps = 0.4 0.1\n")
    again = parse_config(render_config(cfg))
    assert again == cfg


def test_key_outside_section_rejected():
    with pytest.raises(ConfigError, match="outside"):
        parse_config("L = 2\n" + MINIMAL)
