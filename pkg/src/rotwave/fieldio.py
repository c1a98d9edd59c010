"""
On-disk formats shared with the post-processing scripts.

Field dumps are binary, little-endian: the magic bytes "RWL1", a u32 rank,
u32 dims[rank], then float64 samples in row-major order, one file per scalar
component. Scalar time series go to CSV with a header row and full float64
precision so round trips are bit-exact.
"""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

MAGIC = b"RWL1"


class FormatError(ValueError):
    """Raised when a dump or CSV does not match the documented layout."""


def write_field(path: str | Path, values: np.ndarray) -> None:
    """Write one scalar field (any rank) as an RWL1 dump."""
    arr = np.ascontiguousarray(values, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(np.uint32(arr.ndim).astype("<u4").tobytes())
        fh.write(np.asarray(arr.shape, dtype="<u4").tobytes())
        fh.write(arr.tobytes())


def read_field(path: str | Path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        rank_bytes = fh.read(4)
        if len(rank_bytes) != 4:
            raise FormatError(f"{path}: truncated header")
        rank = int(np.frombuffer(rank_bytes, dtype="<u4")[0])
        if not 0 < rank <= 8:
            raise FormatError(f"{path}: implausible rank {rank}")
        dims = np.frombuffer(fh.read(4 * rank), dtype="<u4").astype(int)
        if len(dims) != rank:
            raise FormatError(f"{path}: truncated dims")
        n = int(np.prod(dims))
        data = np.frombuffer(fh.read(8 * n), dtype="<f8")
        if data.size != n:
            raise FormatError(f"{path}: expected {n} samples, found {data.size}")
        if fh.read(1):
            raise FormatError(f"{path}: trailing bytes after payload")
    return data.reshape(dims)


def write_csv(path: str | Path, columns: dict[str, np.ndarray]) -> None:
    """Write named columns of equal length with %.17g precision."""
    names = list(columns)
    cols = [np.asarray(columns[k], dtype=float) for k in names]
    if len({len(c) for c in cols}) > 1:
        raise ValueError("CSV columns must have equal length")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in zip(*cols):
            writer.writerow([f"{v:.17g}" for v in row])


def read_csv(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            names = next(reader)
        except StopIteration:
            raise FormatError(f"{path}: empty CSV") from None
        rows = list(reader)
    out = {}
    for j, name in enumerate(names):
        try:
            out[name] = np.array([float(r[j]) for r in rows])
        except (IndexError, ValueError) as exc:
            raise FormatError(f"{path}: column {name!r} is not numeric: {exc}") from None
    return out


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, int, np.floating, np.integer)):
        v = float(obj)
        # keep the output strict JSON: no Infinity / NaN literals
        return v if np.isfinite(v) else None
    return obj


def write_sidecar(path: str | Path, payload: dict) -> None:
    """Plain structured text metadata next to a CSV (strict JSON, sorted keys)."""
    with open(path, "w") as fh:
        json.dump(_json_safe(payload), fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def read_sidecar(path: str | Path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(out_dir: str | Path, incomplete: bool = False) -> Path:
    """Hash every artifact in `out_dir` into MANIFEST (itself excluded)."""
    out_dir = Path(out_dir)
    lines = []
    for p in sorted(out_dir.rglob("*")):
        if p.is_file() and p.name != "MANIFEST":
            rel = p.relative_to(out_dir).as_posix()
            flag = "  INCOMPLETE" if incomplete else ""
            lines.append(f"{sha256_file(p)}  {rel}{flag}")
    manifest = out_dir / "MANIFEST"
    manifest.write_text("\n".join(lines) + "\n")
    return manifest
