"""Subsets of [m] as bitmasks, colex ranking and exterior-product signs.

Elements are 1-based: element ``i`` lives in bit ``i - 1``. Subsets of a fixed
size are ranked in colexicographic order, the basis order used by every
subset-indexed block of a pencil.
"""

from __future__ import annotations

import functools
import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

MAX_GROUND_SET = 32


def _check_ground_set(m: int) -> None:
    if not 0 <= m <= MAX_GROUND_SET:
        raise ValueError(f"Ground set size must be between 0 and {MAX_GROUND_SET}, got {m}")


@dataclass(frozen=True, slots=True, order=True)
class Subset:
    """A subset of ``{1, ..., m}`` stored as a bitmask."""

    m: int
    mask: int

    def __post_init__(self):
        _check_ground_set(self.m)
        if self.mask < 0 or self.mask >> self.m:
            raise ValueError(f"Mask {self.mask:#b} does not fit a ground set of size {self.m}")

    @classmethod
    def of(cls, m: int, members: Iterable[int]) -> Subset:
        mask = 0
        for element in members:
            if not 1 <= element <= m:
                raise ValueError(f"Element {element} is outside 1..{m}")
            mask |= 1 << (element - 1)
        return cls(m, mask)

    @classmethod
    def empty(cls, m: int) -> Subset:
        return cls(m, 0)

    @classmethod
    def full(cls, m: int) -> Subset:
        return cls(m, (1 << m) - 1)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.m) if self.mask >> i & 1)

    def complement(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.m) if not self.mask >> i & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, element: object) -> bool:
        return isinstance(element, int) and 1 <= element <= self.m and bool(
            self.mask >> (element - 1) & 1
        )

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __str__(self) -> str:
        return "{" + ",".join(str(i) for i in self.members) + "}"


def subset_rank(subset: Subset) -> int:
    """Colex rank among subsets of the same size: sum of C(a_t - 1, t)."""
    rank = 0
    for t, element in enumerate(subset.members, start=1):
        rank += math.comb(element - 1, t)
    return rank


def subset_unrank(k: int, m: int, rank: int) -> Subset:
    """Inverse of :func:`subset_rank` for ``k``-subsets of ``[m]``."""
    _check_ground_set(m)
    if not 0 <= k <= m:
        raise ValueError(f"Subset size {k} must lie in 0..{m}")
    total = math.comb(m, k)
    if not 0 <= rank < total:
        raise ValueError(f"Rank {rank} out of range for {k}-subsets of [{m}] (count {total})")
    mask = 0
    ceiling = m - 1
    for t in range(k, 0, -1):
        c = ceiling
        while math.comb(c, t) > rank:
            c -= 1
        mask |= 1 << c
        rank -= math.comb(c, t)
        ceiling = c - 1
    return Subset(m, mask)


@functools.lru_cache(maxsize=256)
def subsets(m: int, k: int) -> tuple[Subset, ...]:
    """All ``k``-subsets of ``[m]`` in colex order."""
    return tuple(subset_unrank(k, m, r) for r in range(math.comb(m, k)))


def insert(element: int, subset: Subset) -> Subset | None:
    """``subset ∪ {element}``, or ``None`` when ``element`` is already present."""
    if not 1 <= element <= subset.m:
        raise ValueError(f"Element {element} is outside 1..{subset.m}")
    bit = 1 << (element - 1)
    if subset.mask & bit:
        return None
    return Subset(subset.m, subset.mask | bit)


def wedge_sign(element: int, subset: Subset) -> int:
    """Sign of ``e_element ∧ e_I`` against the sorted basis vector of ``I ∪ {element}``.

    Equals ``(-1)`` to the number of members of ``subset`` smaller than ``element``.
    """
    if element in subset:
        raise ValueError(f"Element {element} already belongs to {subset}")
    if not 1 <= element <= subset.m:
        raise ValueError(f"Element {element} is outside 1..{subset.m}")
    below = subset.mask & ((1 << (element - 1)) - 1)
    return -1 if below.bit_count() & 1 else 1
