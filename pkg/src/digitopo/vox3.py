"""The vox3 text container for binary volumes.

Layout, fixed bit-exactly:

    vox3 <nx> <ny> <nz>
    <ny lines of nx characters from {0,1}>   (slab z = 0)
    <blank line>
    <next slab>
    ...

One blank line separates consecutive slabs; the file ends with a
trailing newline. Any other character, a dimension mismatch, or a
missing trailing newline is a parse error carrying the line number.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .errors import ParseError
from .grid import Volume3D

__all__ = ["read_vox3", "write_vox3", "iter_vox3_slabs"]

_MAGIC = "vox3"


def _parse_header(line: str) -> tuple[int, int, int]:
    parts = line.split()
    if len(parts) != 4 or parts[0] != _MAGIC:
        raise ParseError(f"bad header {line!r}, expected 'vox3 <nx> <ny> <nz>'", 1)
    try:
        nx, ny, nz = (int(p) for p in parts[1:])
    except ValueError:
        raise ParseError(f"bad dimensions in header {line!r}", 1) from None
    if nx <= 0 or ny <= 0 or nz <= 0:
        raise ParseError(f"dimensions must be positive, got {nx} {ny} {nz}", 1)
    return nx, ny, nz


def _parse_row(line: str, nx: int, lineno: int) -> np.ndarray:
    if len(line) != nx:
        raise ParseError(f"expected {nx} characters, found {len(line)}", lineno)
    row = np.frombuffer(line.encode("ascii", "replace"), dtype=np.uint8)
    bad = (row != 0x30) & (row != 0x31)
    if bad.any():
        col = int(np.argmax(bad))
        raise ParseError(f"invalid character {line[col]!r} at column {col + 1}", lineno)
    return row == 0x31


def iter_vox3_slabs(path) -> Iterator[np.ndarray]:
    """Yield (ny, nx) boolean slabs in z order without loading the volume.

    The first yielded value is the (nx, ny, nz) dimension triple; slabs
    follow. Streaming consumers fold the slabs one at a time.
    """
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        first = fh.readline()
        if not first.endswith("\n"):
            raise ParseError("missing newline after header", 1)
        nx, ny, nz = _parse_header(first[:-1])
        yield (nx, ny, nz)
        lineno = 1
        for z in range(nz):
            if z > 0:
                sep = fh.readline()
                lineno += 1
                if sep != "\n":
                    raise ParseError("expected blank line between slabs", lineno)
            slab = np.empty((ny, nx), dtype=bool)
            for y in range(ny):
                raw = fh.readline()
                lineno += 1
                if not raw.endswith("\n"):
                    raise ParseError(
                        "unexpected end of file inside slab"
                        if raw == ""
                        else "missing trailing newline",
                        lineno,
                    )
                slab[y] = _parse_row(raw[:-1], nx, lineno)
            yield slab
        trailing = fh.read()
        if trailing.strip("\n"):
            lineno += 1
            raise ParseError("trailing content after last slab", lineno)


def read_vox3(path) -> Volume3D:
    """Parse a vox3 file into a volume."""
    it = iter_vox3_slabs(path)
    nx, ny, nz = next(it)
    cells = np.empty((nz, ny, nx), dtype=bool)
    for z, slab in enumerate(it):
        cells[z] = slab
    return Volume3D(nx, ny, nz, cells)


def write_vox3(vol: Volume3D, path) -> None:
    """Write the volume in vox3 layout, round-trip bit-exact."""
    digits = vol.cells.astype(np.uint8) + 0x30
    with open(path, "wb") as fh:
        fh.write(f"{_MAGIC} {vol.nx} {vol.ny} {vol.nz}\n".encode())
        for z in range(vol.nz):
            if z > 0:
                fh.write(b"\n")
            for y in range(vol.ny):
                fh.write(digits[z, y].tobytes() + b"\n")
