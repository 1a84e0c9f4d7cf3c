"""Counts of permutation tuples with prescribed cycle types, and the
generating function of branched covers built from them."""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial, prod
from typing import Iterable, Sequence

from . import kernels
from .characters import character, dimension
from .partitions import Partition, _as_partition, class_size, cycle_type, partitions_of
from .series import FormalSeries, make_vars

DEFAULT_BUDGET = 10**9


class BudgetExceeded(RuntimeError):
    pass


class ConsistencyError(ArithmeticError):
    pass


def compute_budget() -> int:
    raw = os.environ.get("HYPERHURWITZ_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class ProfileTuple:
    profiles: tuple[Partition, ...]

    def __init__(self, profiles: Iterable):
        ps = tuple(_as_partition(p) for p in profiles)
        if len(ps) < 3:
            raise ValueError("need at least three branch points")
        d = ps[0].d
        if d < 1 or any(p.d != d for p in ps):
            raise ValueError("profile degree mismatch")
        object.__setattr__(self, "profiles", ps)

    @property
    def n(self) -> int:
        return len(self.profiles)

    @property
    def d(self) -> int:
        return self.profiles[0].d

    def to_json(self) -> list[list[int]]:
        return [p.to_json() for p in self.profiles]


@dataclass(frozen=True)
class CoverCount:
    disconnected: Fraction
    connected: Fraction
    genus: int | str


# symmetric-group tables shared by the brute-force counter

@lru_cache(maxsize=None)
def _group(d: int):
    perms = list(permutations(range(d)))
    rank = {p: i for i, p in enumerate(perms)}
    table = [[rank[tuple(a[b[i]] for i in range(d))] for b in perms] for a in perms]
    inverse = []
    for p in perms:
        inv = [0] * d
        for i, j in enumerate(p):
            inv[j] = i
        inverse.append(rank[tuple(inv)])
    classes = partitions_of(d)
    cindex = {c: i for i, c in enumerate(classes)}
    class_of = [cindex[cycle_type(p)] for p in perms]
    members = [[r for r, c in enumerate(class_of) if c == k] for k in range(len(classes))]
    return perms, table, inverse, classes, class_of, members


@lru_cache(maxsize=None)
def _tally(d: int, head: tuple[Partition, ...], connected: bool, backend: str | None):
    perms, table, inverse, classes, class_of, members = _group(d)
    cindex = {c: i for i, c in enumerate(classes)}
    lists = [members[cindex[mu]] for mu in head]
    counts, conn = kernels.tally_products(
        table, inverse, class_of, lists, perms, len(classes), connected, backend=backend
    )
    return {classes[i]: counts[i] for i in range(len(classes))}, {
        classes[i]: conn[i] for i in range(len(classes))
    }


def count_tuples_bruteforce(pt: ProfileTuple, connected_only: bool = False,
                            budget: int | None = None, backend: str | None = None) -> int:
    """Enumerate sigma_1..sigma_{n-1} in their classes; the last element is forced."""
    d, n = pt.d, pt.n
    cap = compute_budget() if budget is None else budget
    if factorial(d) ** (n - 1) > cap:
        raise BudgetExceeded(f"|S_{d}|^{n - 1} = {factorial(d) ** (n - 1)} exceeds budget {cap}")
    full, conn = _tally(d, pt.profiles[:-1], connected_only, backend)
    return (conn if connected_only else full)[pt.profiles[-1]]


def count_tuples_frobenius(pt: ProfileTuple) -> int:
    d, n = pt.d, pt.n
    total = Fraction(0)
    for lam in partitions_of(d):
        dim = dimension(lam)
        term = Fraction(dim) ** (2 - n)
        for mu in pt.profiles:
            term *= character(lam, mu)
        total += term
    total *= Fraction(prod(class_size(mu) for mu in pt.profiles), factorial(d))
    if total.denominator != 1 or total < 0:
        raise ConsistencyError(f"character sum is not a non-negative integer: {total}")
    return int(total)


def euler_characteristic(pt) -> int:
    """Riemann-Hurwitz: total cycle count minus (n - 2) d."""
    if not isinstance(pt, ProfileTuple):
        pt = ProfileTuple(pt)
    return sum(len(p) for p in pt.profiles) - (pt.n - 2) * pt.d


def euler_characteristic_from_lengths(n: int, d: int, lengths: Sequence[int]) -> int:
    if len(lengths) != n:
        raise ValueError("need one cycle count per branch point")
    return sum(lengths) - (n - 2) * d


def genus_of(chi: int) -> int:
    if chi % 2:
        raise ValueError(f"odd Euler characteristic {chi}")
    return (2 - chi) // 2


def parity_obstructed(pt: ProfileTuple) -> bool:
    return sum(pt.d - len(p) for p in pt.profiles) % 2 == 1


def profile_tuples(n: int, d: int) -> Iterable[ProfileTuple]:
    ps = partitions_of(d)
    for combo in product(ps, repeat=n):
        yield ProfileTuple(combo)


# generating functions

def weight_vars(pt: ProfileTuple) -> tuple[tuple[str, int], ...]:
    """Monomial in t, tt, g2, g3 attached to a profile tuple."""
    first, second, last = pt.profiles[0], pt.profiles[1], pt.profiles[-1]
    pairs = [(f"t{r}", 1) for r in first] + [(f"tt{s}", 1) for s in last]
    pairs.append(("g2", len(second)))
    pairs.append(("g3", sum(len(p) for p in pt.profiles[2:-1])))
    return make_vars(pairs)


def refined_vars(pt: ProfileTuple) -> tuple[tuple[str, int], ...]:
    """One variable per (point, part size): separates every profile tuple."""
    return make_vars([(f"p{i}_{r}", 1) for i, mu in enumerate(pt.profiles) for r in mu])


def specialize_refined(n: int):
    """Ring homomorphism from refined variables to the weight variables."""

    def rename(name: str):
        i, r = name[1:].split("_")
        i = int(i)
        if i == 0:
            return [(f"t{r}", 1)]
        if i == n - 1:
            return [(f"tt{r}", 1)]
        if i == 1:
            return [("g2", 1)]
        return [("g3", 1)]

    return rename


def _counts_table(n: int, d: int) -> dict[tuple[Partition, ...], int]:
    return {pt.profiles: count_tuples_frobenius(pt) for pt in profile_tuples(n, d)}


def disconnected_series(n: int, d_max: int, refined: bool = False) -> FormalSeries:
    if n < 3 or d_max < 1:
        raise ValueError("need n >= 3 and d_max >= 1")
    terms = {(0, 0, ()): Fraction(1)}
    work = 0
    cap = compute_budget()
    for d in range(1, d_max + 1):
        work += len(partitions_of(d)) ** n
        if work > cap:
            raise BudgetExceeded(f"profile-tuple count {work} exceeds budget {cap}")
        for pt in profile_tuples(n, d):
            c = count_tuples_frobenius(pt)
            if c == 0:
                continue
            key = (d, euler_characteristic(pt), refined_vars(pt) if refined else weight_vars(pt))
            terms[key] = terms.get(key, Fraction(0)) + Fraction(c, factorial(d))
    return FormalSeries(d_max, terms)


def generating_function(n: int, d_max: int, refined: bool = False) -> FormalSeries:
    """Connected series: the logarithm of the disconnected one."""
    return disconnected_series(n, d_max, refined).log()


def cover_count(pt: ProfileTuple, connected_series: FormalSeries | None = None) -> CoverCount:
    """Weighted counts; the connected part is read off the refined logarithm."""
    F = connected_series or generating_function(pt.n, pt.d, refined=True)
    chi = euler_characteristic(pt)
    conn = F.coefficient(pt.d, chi, refined_vars(pt))
    disc = Fraction(count_tuples_frobenius(pt), factorial(pt.d))
    genus: int | str = genus_of(chi) if conn else "mixed"
    return CoverCount(disconnected=disc, connected=conn, genus=genus)


def braid_invariance_check(pt: ProfileTuple, exhaustive: bool = True) -> bool:
    """True iff the count is unchanged by every reordering of the profiles."""
    base = count_tuples_frobenius(pt)
    orders = permutations(range(pt.n)) if exhaustive else (
        tuple(range(i)) + (i + 1, i) + tuple(range(i + 2, pt.n)) for i in range(pt.n - 1)
    )
    return all(count_tuples_frobenius(ProfileTuple([pt.profiles[j] for j in o])) == base for o in orders)


def hurwitz_move(pt: ProfileTuple, i: int) -> ProfileTuple:
    """Swap adjacent points i, i+1: (s_i, s_{i+1}) -> (s_i s_{i+1} s_i^-1, s_i)."""
    ps = list(pt.profiles)
    ps[i], ps[i + 1] = ps[i + 1], ps[i]
    return ProfileTuple(ps)


def hurwitz_move_on_tuple(sigmas: Sequence[Sequence[int]], i: int) -> list[tuple[int, ...]]:
    """Action of the braid generator on an explicit tuple of permutations."""
    s = [tuple(x) for x in sigmas]
    a, b = s[i], s[i + 1]
    ainv = [0] * len(a)
    for k, v in enumerate(a):
        ainv[v] = k
    conj = tuple(a[b[ainv[k]]] for k in range(len(a)))
    s[i], s[i + 1] = conj, a
    return s
