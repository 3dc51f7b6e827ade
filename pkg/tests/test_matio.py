"""Tests for the binary matrix file format."""

import struct

import numpy as np
import pytest

from labelot import InputError, read_matrix, write_matrix
from labelot.matio import FORMAT_VERSION, MAGIC


class TestRoundTrip:
    def test_write_read_write_is_bit_exact(self, tmp_path):
        rng = np.random.default_rng(31)
        values = rng.normal(size=(13, 7)).astype(np.float32)
        first = tmp_path / "a.edtm"
        second = tmp_path / "b.edtm"
        write_matrix(first, values)
        loaded = read_matrix(first)
        assert loaded.dtype == np.float32
        assert np.array_equal(loaded, values)
        write_matrix(second, loaded)
        assert first.read_bytes() == second.read_bytes()

    def test_float64_input_quantized_once(self, tmp_path):
        values = np.array([[0.1, 0.2], [0.3, 0.4]])
        path = tmp_path / "m.edtm"
        write_matrix(path, values)
        loaded = read_matrix(path)
        assert np.array_equal(loaded, values.astype(np.float32))

    def test_single_cell_and_wide_shapes(self, tmp_path):
        for shape in [(1, 1), (1, 9), (9, 1)]:
            values = np.arange(shape[0] * shape[1], dtype=np.float32).reshape(shape)
            path = tmp_path / f"{shape[0]}x{shape[1]}.edtm"
            write_matrix(path, values)
            assert np.array_equal(read_matrix(path), values)

    def test_header_layout(self, tmp_path):
        values = np.zeros((2, 3), dtype=np.float32)
        path = tmp_path / "h.edtm"
        write_matrix(path, values)
        raw = path.read_bytes()
        magic, version, rows, cols = struct.unpack("<4sHQQ", raw[:22])
        assert magic == MAGIC == b"EDTM"
        assert version == FORMAT_VERSION == 1
        assert (rows, cols) == (2, 3)
        assert len(raw) == 22 + 2 * 3 * 4


class TestInvalidFiles:
    def write_valid(self, path):
        write_matrix(path, np.ones((2, 2), dtype=np.float32))
        return path.read_bytes()

    def test_bad_magic(self, tmp_path):
        raw = self.write_valid(tmp_path / "ok.edtm")
        bad = tmp_path / "bad.edtm"
        bad.write_bytes(b"XXXX" + raw[4:])
        with pytest.raises(InputError, match="magic"):
            read_matrix(bad)

    def test_unknown_version(self, tmp_path):
        raw = self.write_valid(tmp_path / "ok.edtm")
        bad = tmp_path / "bad.edtm"
        bad.write_bytes(raw[:4] + struct.pack("<H", 9) + raw[6:])
        with pytest.raises(InputError, match="version"):
            read_matrix(bad)

    def test_truncated_payload(self, tmp_path):
        raw = self.write_valid(tmp_path / "ok.edtm")
        bad = tmp_path / "bad.edtm"
        bad.write_bytes(raw[:-3])
        with pytest.raises(InputError):
            read_matrix(bad)

    def test_truncated_header(self, tmp_path):
        bad = tmp_path / "bad.edtm"
        bad.write_bytes(b"EDTM\x01")
        with pytest.raises(InputError):
            read_matrix(bad)

    def test_non_2d_write_rejected(self, tmp_path):
        with pytest.raises(InputError):
            write_matrix(tmp_path / "x.edtm", np.zeros(4, dtype=np.float32))
