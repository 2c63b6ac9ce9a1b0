"""Binary snapshot format BSNAP1 for spectral fields.

Layout (little-endian):

    magic   6 bytes  b"BSNAP1"
    n       u8       spatial dimension
    N       u32      points per axis
    L       f64      box side length
    c       u8       component count (1 scalar, n vector, n*n tensor)
    data    c * N^n complex128, row-major axis order

The stored coefficients are the field's spectral coefficients; a write
followed by a read is bit-exact.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Union

import numpy as np

from .spectral import GridSpec, SpectralField

__all__ = ["write_snapshot", "read_snapshot", "MAGIC"]

MAGIC = b"BSNAP1"
_HEADER = struct.Struct("<6sBId B")  # magic, n, N, L, c


def _component_count(field: SpectralField) -> int:
    comp = field.component_shape
    return int(np.prod(comp)) if comp else 1


def write_snapshot(path: Union[str, Path], field: SpectralField) -> None:
    grid = field.grid
    c = _component_count(field)
    header = _HEADER.pack(MAGIC, grid.n, grid.N, grid.L, c)
    flat = np.ascontiguousarray(field.coeffs, dtype="<c16").reshape(c, -1)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(flat.tobytes())


def read_snapshot(path: Union[str, Path]) -> SpectralField:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError(f"{path}: truncated BSNAP1 header")
        magic, n, N, L, c = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
        grid = GridSpec(n=n, N=N, L=L)
        expected = c * N**n
        data = np.frombuffer(fh.read(expected * 16), dtype="<c16")
    if data.size != expected:
        raise ValueError(f"{path}: truncated payload ({data.size} of {expected} coefficients)")
    if c == 1:
        shape: tuple[int, ...] = grid.shape
    elif c == n:
        shape = (n,) + grid.shape
    elif c == n * n:
        shape = (n, n) + grid.shape
    else:
        raise ValueError(f"{path}: component count {c} is not 1, n or n^2 for n={n}")
    return SpectralField(grid, data.reshape(shape).astype(np.complex128))
