"""Bitmask encoding of subsets of {1, ..., n}.

Bit i-1 of a mask encodes membership of element i; element labels are 1-based
in every public interface, bit positions 0-based internally. These helpers are
the shared vocabulary for tables, polynomials and matroid conversions.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator


def mask_of(labels: Iterable[int]) -> int:
    """Pack 1-based element labels into a bitmask."""
    m = 0
    for e in labels:
        if e < 1:
            raise ValueError(f"element labels are 1-based, got {e}")
        m |= 1 << (e - 1)
    return m


def labels_of(mask: int) -> tuple[int, ...]:
    """Unpack a bitmask into ascending 1-based labels."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def masks_of_size(n: int, k: int) -> Iterator[int]:
    """All size-k subsets of [n], in lexicographic order of their label tuples."""
    for combo in combinations(range(n), k):
        m = 0
        for b in combo:
            m |= 1 << b
        yield m


def submasks(mask: int) -> Iterator[int]:
    """All subsets of mask, in decreasing mask order; includes mask and 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def compress(mask: int, positions: tuple[int, ...]) -> int:
    """Repack the bits of mask found at the given 0-based positions into bits 0..len-1."""
    out = 0
    for new, old in enumerate(positions):
        if mask >> old & 1:
            out |= 1 << new
    return out


def expand(mask: int, positions: tuple[int, ...]) -> int:
    """Inverse of compress: move bit i of mask to the i-th listed position."""
    out = 0
    for new, old in enumerate(positions):
        if mask >> new & 1:
            out |= 1 << old
    return out
