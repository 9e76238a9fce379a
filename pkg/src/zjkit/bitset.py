"""Dense subsets of {0..n-1} stored as Python ints.

Bit ``i`` of the integer is set iff element ``i`` is in the set. Union,
intersection and containment are then single big-int operations; conversion
to and from numpy index arrays goes through ``packbits``.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np


def from_indices(indices: Iterable[int] | np.ndarray, n: int) -> int:
    flags = np.zeros(n, dtype=bool)
    idx = np.asarray(indices, dtype=np.int64)
    if idx.size:
        flags[idx] = True
    return from_bool(flags)


def from_bool(flags: np.ndarray) -> int:
    packed = np.packbits(flags, bitorder="little")
    return int.from_bytes(packed.tobytes(), "little")


def to_bool(mask: int, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    raw = np.frombuffer(mask.to_bytes(nbytes, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(bool)


def to_indices(mask: int, n: int) -> np.ndarray:
    return np.flatnonzero(to_bool(mask, n))


def full(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return mask.bit_count()


def lowest(mask: int) -> int:
    """Index of the least set bit; -1 for the empty set."""
    if not mask:
        return -1
    return (mask & -mask).bit_length() - 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0
