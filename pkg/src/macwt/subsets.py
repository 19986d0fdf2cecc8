"""Bitmask helpers for user subsets.

Users are numbered 1..K; subset masks use bit k-1 for user k, so mask 0b101
is the subset {1, 3}.  All region enumeration iterates masks in ascending
order, which keeps provenance tags and output files reproducible.
"""

from collections.abc import Iterable, Iterator


def mask_of(users: Iterable[int]) -> int:
    m = 0
    for k in users:
        if k < 1:
            raise ValueError(f"user indices are 1-based, got {k}")
        m |= 1 << (k - 1)
    return m


def members(mask: int) -> tuple[int, ...]:
    """1-based user indices of a mask, ascending."""
    out = []
    k = 1
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return tuple(out)


def complement(mask: int, user_count: int) -> int:
    full = (1 << user_count) - 1
    if mask & ~full:
        raise ValueError(f"mask {mask:#b} wider than K={user_count}")
    return full & ~mask


def subsets(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in ascending numeric order (includes 0)."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        # next submask in ascending order
        sub = (sub - mask) & mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def format_set(mask: int) -> str:
    return "{" + ",".join(str(k) for k in members(mask)) + "}"
