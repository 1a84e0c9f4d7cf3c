"""Irreducible characters of S_d (Murnaghan-Nakayama) and hook-length dimensions."""
from __future__ import annotations

import threading
from math import factorial, prod

from .partitions import Partition, _as_partition, hooks_and_contents

_memo: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}
_memo_lock = threading.Lock()


def _beta(parts: tuple[int, ...]) -> tuple[int, ...]:
    n = len(parts)
    return tuple(parts[i] + (n - 1 - i) for i in range(n))


def _from_beta(beta) -> tuple[int, ...]:
    b = sorted(beta, reverse=True)
    n = len(b)
    return tuple(x for x in (b[i] - (n - 1 - i) for i in range(n)) if x > 0)


def _mn(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1 if not lam else 0
    key = (lam, mu)
    hit = _memo.get(key)
    if hit is not None:
        return hit
    k, rest = mu[0], mu[1:]
    beta = _beta(lam)
    occupied = set(beta)
    total = 0
    for b in beta:
        t = b - k
        if t < 0 or t in occupied:
            continue
        # leg length = beads strictly between the new and old positions
        height = sum(1 for c in beta if t < c < b)
        new = _from_beta([t if c == b else c for c in beta])
        total += (-1) ** height * _mn(new, rest)
    with _memo_lock:
        _memo[key] = total
    return total


def character(lam, mu) -> int:
    """chi^lam evaluated on the conjugacy class of cycle type mu."""
    lam, mu = _as_partition(lam), _as_partition(mu)
    if lam.d != mu.d:
        raise ValueError("profile degree mismatch")
    return _mn(lam.parts, mu.parts)


def dimension(lam) -> int:
    lam = _as_partition(lam)
    hooks, _ = hooks_and_contents(lam)
    return factorial(lam.d) // prod(hooks)


def clear_cache() -> None:
    with _memo_lock:
        _memo.clear()


def character_table(d: int) -> tuple[list[Partition], list[list[int]]]:
    """Rows indexed by lambda, columns by mu, both in canonical partition order."""
    from .partitions import partitions_of

    ps = partitions_of(d)
    return ps, [[character(l, m) for m in ps] for l in ps]
