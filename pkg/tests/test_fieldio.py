import numpy as np
import pytest

from rotwave.fieldio import (
    FormatError,
    read_csv,
    read_field,
    read_sidecar,
    sha256_file,
    write_csv,
    write_field,
    write_manifest,
    write_sidecar,
)


def test_field_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    for shape in [(7,), (5, 3), (4, 4, 8), (2, 3, 4, 5)]:
        arr = rng.standard_normal(shape)
        p = tmp_path / "f.rwl"
        write_field(p, arr)
        back = read_field(p)
        assert back.shape == arr.shape
        assert np.array_equal(back, arr)


def test_field_header_layout(tmp_path):
    p = tmp_path / "f.rwl"
    write_field(p, np.zeros((3, 2)))
    raw = p.read_bytes()
    assert raw[:4] == b"RWL1"
    assert np.frombuffer(raw[4:8], dtype="<u4")[0] == 2
    assert list(np.frombuffer(raw[8:16], dtype="<u4")) == [3, 2]
    assert len(raw) == 16 + 8 * 6


def test_bad_magic_rejected(tmp_path):
    p = tmp_path / "bad.rwl"
    p.write_bytes(b"NOPE" + bytes(16))
    with pytest.raises(FormatError, match="magic"):
        read_field(p)


def test_truncated_payload_rejected(tmp_path):
    p = tmp_path / "f.rwl"
    write_field(p, np.ones((4, 4)))
    p.write_bytes(p.read_bytes()[:-8])
    with pytest.raises(FormatError, match="samples"):
        read_field(p)


def test_trailing_bytes_rejected(tmp_path):
    p = tmp_path / "f.rwl"
    write_field(p, np.ones(3))
    p.write_bytes(p.read_bytes() + b"\x00")
    with pytest.raises(FormatError, match="trailing"):
        read_field(p)


def test_csv_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(1)
    cols = {"t": rng.standard_normal(20), "energy": np.exp(rng.standard_normal(20) * 30)}
    p = tmp_path / "series.csv"
    write_csv(p, cols)
    back = read_csv(p)
    assert list(back) == ["t", "energy"]
    for k in cols:
        assert np.array_equal(back[k], cols[k])


def test_csv_unequal_columns_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_csv(tmp_path / "x.csv", {"a": np.zeros(3), "b": np.zeros(4)})


def test_csv_non_numeric_rejected(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("a,b\n1.0,oops\n")
    with pytest.raises(FormatError):
        read_csv(p)


def test_sidecar_roundtrip(tmp_path):
    p = tmp_path / "meta.json"
    payload = {"slope": -0.5, "window": [1.0, 50.0], "flag": False}
    write_sidecar(p, payload)
    assert read_sidecar(p) == payload


def test_manifest_lists_and_hashes(tmp_path):
    write_field(tmp_path / "a.rwl", np.ones(3))
    (tmp_path / "sub").mkdir()
    write_csv(tmp_path / "sub" / "b.csv", {"t": np.zeros(2)})
    manifest = write_manifest(tmp_path)
    text = manifest.read_text()
    assert "a.rwl" in text and "sub/b.csv" in text
    assert sha256_file(tmp_path / "a.rwl") in text
    assert "INCOMPLETE" not in text
    # manifest never lists itself
    assert "MANIFEST" not in text


def test_manifest_incomplete_flag(tmp_path):
    write_field(tmp_path / "a.rwl", np.ones(3))
    manifest = write_manifest(tmp_path, incomplete=True)
    assert "INCOMPLETE" in manifest.read_text()
