"""Integer partitions and conjugacy-class bookkeeping for the symmetric group."""
from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Iterator


class Partition:
    """Non-increasing tuple of positive parts with cached size.

    Instances are immutable and hashable, so they double as dictionary keys
    for character and count memo tables.
    """

    __slots__ = ("parts", "d", "_hash")

    def __init__(self, parts: Iterable[int] = ()):
        p = tuple(int(x) for x in parts)
        if any(x < 1 for x in p):
            raise ValueError(f"partition parts must be positive: {p}")
        if any(p[i] < p[i + 1] for i in range(len(p) - 1)):
            raise ValueError(f"partition parts must be non-increasing: {p}")
        object.__setattr__(self, "parts", p)
        object.__setattr__(self, "d", sum(p))
        object.__setattr__(self, "_hash", hash(p))

    def __setattr__(self, key, value):
        raise AttributeError("Partition is immutable")

    @classmethod
    def from_any(cls, parts: Iterable[int]) -> "Partition":
        """Build from parts in any order."""
        return cls(sorted((int(x) for x in parts), reverse=True))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, Partition):
            return self.parts == other.parts
        if isinstance(other, (tuple, list)):
            return self.parts == tuple(other)
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Partition({list(self.parts)})"

    @property
    def length(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> dict[int, int]:
        return dict(Counter(self.parts))

    def conjugate(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(sum(1 for p in self.parts if p > j) for j in range(self.parts[0]))

    def to_json(self) -> list[int]:
        return list(self.parts)


def _as_partition(mu) -> Partition:
    return mu if isinstance(mu, Partition) else Partition.from_any(mu)


@lru_cache(maxsize=None)
def _partitions_bounded(d: int, cap: int) -> tuple[tuple[int, ...], ...]:
    # reverse-lexicographic: largest first part first
    if d == 0:
        return ((),)
    out = []
    for first in range(min(d, cap), 0, -1):
        for rest in _partitions_bounded(d - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(d: int) -> list[Partition]:
    """All partitions of ``d`` in reverse-lexicographic order."""
    if d < 0:
        raise ValueError("degree must be non-negative")
    return [Partition(p) for p in _partitions_bounded(d, d)]


def partition_count(d: int) -> int:
    """Number of partitions of d from Euler's pentagonal recurrence."""
    p = [1] + [0] * d
    for m in range(1, d + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[d]


def z_factor(mu) -> int:
    """Centralizer order: product of i^m_i * m_i! over part multiplicities."""
    mu = _as_partition(mu)
    return prod(i**m * factorial(m) for i, m in mu.multiplicities().items())


def class_size(mu) -> int:
    mu = _as_partition(mu)
    return factorial(mu.d) // z_factor(mu)


def hooks_and_contents(lam) -> tuple[list[int], list[int]]:
    """Hook lengths and contents (column minus row), cells in row-major order."""
    lam = _as_partition(lam)
    conj = lam.conjugate().parts
    hooks, contents = [], []
    for i, row in enumerate(lam.parts):
        for j in range(row):
            hooks.append((row - j - 1) + (conj[j] - i - 1) + 1)
            contents.append(j - i)
    return hooks, contents


def cycle_type(perm: Iterable[int]) -> Partition:
    """Cycle type of a permutation given in one-line notation on 0..d-1."""
    perm = list(perm)
    seen = [False] * len(perm)
    lengths = []
    for s in range(len(perm)):
        if not seen[s]:
            n, j = 0, s
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                n += 1
            lengths.append(n)
    return Partition.from_any(lengths)
