#!/usr/bin/env python3
"""Run the bundled quasi-geostrophic dipole experiment and report drifts."""

import sys
from pathlib import Path

import numpy as np

from rotwave.cli import main
from rotwave.fieldio import read_csv

HERE = Path(__file__).resolve().parent.parent


def run() -> int:
    out = HERE / "out" / "qg_dipole"
    rc = main(["qg-run", "--config", str(HERE / "configs" / "qg_dipole.cfg"), "--out", str(out)])
    if rc:
        return rc
    series = read_csv(out / "conservation.csv")
    e = series["energy"]
    p = series["p_l2"]
    print(f"energy drift {np.max(np.abs(e - e[0])) / e[0]:.3e}")
    print(f"|P| drift    {np.max(np.abs(p - p[0])) / p[0]:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
