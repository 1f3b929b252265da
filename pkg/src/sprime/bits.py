"""Bitmask helpers.  A subset of a carrier {0..n-1} is a Python int."""

import numpy as np


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


def indices_of(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def lowest(mask: int) -> int:
    """Index of the lowest set bit; -1 for the empty mask."""
    return (mask & -mask).bit_length() - 1


def full(n: int) -> int:
    return (1 << n) - 1


def from_bool(arr) -> int:
    arr = np.asarray(arr, dtype=bool)
    if arr.size == 0:
        return 0
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def rows_from_bool(mat) -> list[int]:
    mat = np.asarray(mat, dtype=bool)
    if mat.shape[1] == 0:
        return [0] * mat.shape[0]
    packed = np.packbits(mat, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def to_bool(mask: int, n: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((n + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def order_key(mask: int, n: int) -> str:
    """Sort key comparing subsets as little-endian bit strings (bit 0 first)."""
    return format(mask, f"0{n}b")[::-1] if n else ""
