"""Binary matrix file format shared by embeddings, scores, costs and plans.

Layout: magic bytes b"EDTM", format version as u16, then rows and cols as
u64, then the payload as row-major little-endian float32. All integers are
little-endian. Files round-trip bit-exactly: reading and rewriting a file
produces identical bytes.
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .errors import InputError

MAGIC = b"EDTM"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sHQQ")


def write_matrix(path: str | Path, values: np.ndarray) -> None:
    """Write a 2-d array, converting to float32. Atomic: temp file + rename."""
    arr = np.ascontiguousarray(values, dtype="<f4")
    if arr.ndim != 2:
        raise InputError(f"matrix file payload must be 2-dimensional, got shape {arr.shape}")
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, arr.shape[0], arr.shape[1]))
        fh.write(arr.tobytes(order="C"))
    os.replace(tmp, path)


def read_matrix(path: str | Path) -> np.ndarray:
    """Read a matrix file back as float32, validating header and size."""
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise InputError(f"matrix file {path} is truncated before the header ends")
        magic, version, rows, cols = _HEADER.unpack(header)
        if magic != MAGIC:
            raise InputError(f"matrix file {path} has wrong magic bytes {magic!r}")
        if version != FORMAT_VERSION:
            raise InputError(f"matrix file {path} has unsupported version {version}")
        payload = fh.read()
    expected = rows * cols * 4
    if len(payload) != expected:
        raise InputError(
            f"matrix file {path} payload is {len(payload)} bytes, expected {expected}"
        )
    return np.frombuffer(payload, dtype="<f4").reshape(rows, cols).copy()
