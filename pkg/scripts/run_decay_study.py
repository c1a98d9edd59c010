#!/usr/bin/env python3
"""Run the bundled dispersive-decay experiment and print the fitted slope."""

import sys
from pathlib import Path

from rotwave.cli import main
from rotwave.fieldio import read_sidecar

HERE = Path(__file__).resolve().parent.parent


def run() -> int:
    out = HERE / "out" / "decay"
    rc = main(["decay-study", "--config", str(HERE / "configs" / "decay.cfg"), "--out", str(out)])
    if rc:
        return rc
    meta = read_sidecar(out / "decay.meta.json")
    print(f"fitted slope {meta['slope']:.4f} over window {meta['fit_window']}")
    print(f"recurrence horizon {meta['recurrence_time']:.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
