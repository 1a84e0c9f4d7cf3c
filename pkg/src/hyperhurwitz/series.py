"""Truncated multivariate power series with exact rational coefficients.

A monomial is a triple ``(q, n, vars)``: the degree in the marker ``q``, an
integer exponent of ``N`` (a grading, possibly negative) and a sorted tuple
of ``(name, exponent)`` pairs for the remaining commuting variables.
Truncation applies to the ``q`` degree only.
"""
from __future__ import annotations

import re
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Iterable, Mapping

Monomial = tuple[int, int, tuple[tuple[str, int], ...]]

_INDEXED = re.compile(r"^(t|tt)(\d+)$")


def make_vars(pairs: Mapping[str, int] | Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    items = pairs.items() if isinstance(pairs, Mapping) else pairs
    acc: dict[str, int] = defaultdict(int)
    for name, e in items:
        acc[name] += int(e)
    return tuple(sorted((k, v) for k, v in acc.items() if v != 0))


def _merge(a: tuple[tuple[str, int], ...], b: tuple[tuple[str, int], ...]):
    if not a:
        return b
    if not b:
        return a
    return make_vars(list(a) + list(b))


class TruncationError(ValueError):
    pass


class FormalSeries:
    __slots__ = ("D", "terms")

    def __init__(self, D: int, terms: Mapping[Monomial, Fraction] | None = None):
        if D < 0:
            raise ValueError("truncation degree must be non-negative")
        self.D = int(D)
        clean: dict[Monomial, Fraction] = {}
        for (q, n, vs), c in (terms or {}).items():
            if q > self.D:
                continue
            c = Fraction(c)
            if c == 0:
                continue
            vs = make_vars(vs)
            for name, _ in vs:
                m = _INDEXED.match(name)
                if m and int(m.group(2)) > self.D:
                    raise TruncationError(f"variable {name} cannot occur below degree {self.D}")
            key = (int(q), int(n), vs)
            clean[key] = clean.get(key, Fraction(0)) + c
            if clean[key] == 0:
                del clean[key]
        self.terms = clean

    # construction helpers
    @classmethod
    def one(cls, D: int) -> "FormalSeries":
        return cls(D, {(0, 0, ()): Fraction(1)})

    @classmethod
    def monomial(cls, D: int, q: int = 0, n: int = 0, coeff=1, **vs: int) -> "FormalSeries":
        return cls(D, {(q, n, make_vars(vs)): Fraction(coeff)})

    # ring operations
    def _check(self, other: "FormalSeries") -> None:
        if not isinstance(other, FormalSeries):
            raise TypeError("expected FormalSeries")
        if other.D != self.D:
            raise TruncationError(f"truncation mismatch: {self.D} vs {other.D}")

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            other = FormalSeries(self.D, {(0, 0, ()): Fraction(other)})
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return FormalSeries(self.D, out)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries(self.D, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, FormalSeries) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "FormalSeries":
        c = Fraction(c)
        return FormalSeries(self.D, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return self.scale(other)
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        by_q = defaultdict(list)
        for (q, n, vs), c in other.terms.items():
            by_q[q].append((n, vs, c))
        for (q1, n1, v1), c1 in self.terms.items():
            for q2 in range(0, self.D - q1 + 1):
                for n2, v2, c2 in by_q.get(q2, ()):
                    key = (q1 + q2, n1 + n2, _merge(v1, v2))
                    out[key] = out.get(key, Fraction(0)) + c1 * c2
        return FormalSeries(self.D, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, FormalSeries) and self.D == other.D and self.terms == other.terms

    def __repr__(self) -> str:
        return f"FormalSeries(D={self.D}, {len(self.terms)} terms)"

    # grading
    def graded(self, q: int) -> "FormalSeries":
        return FormalSeries(self.D, {k: c for k, c in self.terms.items() if k[0] == q})

    def constant_term(self) -> "FormalSeries":
        return self.graded(0)

    def coefficient(self, q: int, n: int = 0, vars=()) -> Fraction:
        if q > self.D:
            raise TruncationError(f"q-degree {q} exceeds truncation {self.D}")
        return self.terms.get((q, n, make_vars(vars)), Fraction(0))

    def substitute(self, rename: Callable[[str], Iterable[tuple[str, int]]]) -> "FormalSeries":
        """Ring homomorphism sending each variable to a monomial.

        ``rename(name)`` returns the (name, exponent) pairs of the image.
        """
        out: dict[Monomial, Fraction] = {}
        for (q, n, vs), c in self.terms.items():
            pairs = []
            for name, e in vs:
                pairs.extend((m, e * k) for m, k in rename(name))
            key = (q, n, make_vars(pairs))
            out[key] = out.get(key, Fraction(0)) + c
        return FormalSeries(self.D, out)

    def _split(self):
        comps = [self.graded(k) for k in range(self.D + 1)]
        return comps

    # log / exp through the q-grading
    def _require_unit(self):
        c0 = self.graded(0)
        if c0.terms != {(0, 0, ()): Fraction(1)}:
            raise ValueError("nonunit constant term: the q^0 part must be exactly 1")

    def log(self) -> "FormalSeries":
        """log of a series whose q^0 part is 1 (recurrence d F_d = d A_d - sum k F_k A_{d-k})."""
        self._require_unit()
        A = self._split()
        F = [FormalSeries(self.D) for _ in range(self.D + 1)]
        for d in range(1, self.D + 1):
            acc = A[d].scale(d)
            for k in range(1, d):
                if F[k].terms and A[d - k].terms:
                    acc = acc - (F[k] * A[d - k]).scale(k)
            F[d] = acc.scale(Fraction(1, d))
        out = FormalSeries(self.D)
        for f in F:
            out = out + f
        return out

    def exp(self) -> "FormalSeries":
        if self.graded(0).terms:
            raise ValueError("exp needs a series without q^0 part")
        Fp = self._split()
        E = [FormalSeries.one(self.D)] + [FormalSeries(self.D) for _ in range(self.D)]
        for d in range(1, self.D + 1):
            acc = FormalSeries(self.D)
            for k in range(1, d + 1):
                if Fp[k].terms and E[d - k].terms:
                    acc = acc + (Fp[k] * E[d - k]).scale(k)
            E[d] = acc.scale(Fraction(1, d))
        out = FormalSeries(self.D)
        for e in E:
            out = out + e
        return out

    # serialization
    def to_json(self) -> list[dict]:
        rows = []
        for (q, n, vs), c in sorted(self.terms.items()):
            t, tt, other = {}, {}, {}
            g2 = g3 = 0
            for name, e in vs:
                m = _INDEXED.match(name)
                if m:
                    (t if m.group(1) == "t" else tt)[m.group(2)] = e
                elif name == "g2":
                    g2 = e
                elif name == "g3":
                    g3 = e
                else:
                    other[name] = e
            mono = {"q": q, "N": n, "t": t, "tt": tt, "g2": g2, "g3": g3}
            if other:
                mono["other"] = other
            rows.append({"monomial": mono, "coeff": _frac_str(c)})
        return rows

    @classmethod
    def from_json(cls, D: int, rows: list[dict]) -> "FormalSeries":
        terms = {}
        for row in rows:
            m = row["monomial"]
            pairs = [(f"t{k}", v) for k, v in m.get("t", {}).items()]
            pairs += [(f"tt{k}", v) for k, v in m.get("tt", {}).items()]
            pairs += [("g2", m.get("g2", 0)), ("g3", m.get("g3", 0))]
            pairs += list(m.get("other", {}).items())
            terms[(m["q"], m["N"], make_vars(pairs))] = Fraction(row["coeff"])
        return cls(D, terms)


def _frac_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def log1p(a: FormalSeries) -> FormalSeries:
    """log(1 + a); the q^0 part of a must vanish."""
    if a.graded(0).terms:
        raise ValueError("nonunit constant term: argument 1+a needs q^0 part equal to 1")
    return (FormalSeries.one(a.D) + a).log()


def mul(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    return a * b


def coefficient(a: FormalSeries, monomial: Monomial | Mapping) -> Fraction:
    if isinstance(monomial, Mapping):
        pairs = []
        for key, val in monomial.items():
            if key in ("q", "N"):
                continue
            if key in ("t", "tt") and isinstance(val, Mapping):
                pairs.extend((f"{key}{r}", e) for r, e in val.items())
            else:
                pairs.append((key, val))
        return a.coefficient(monomial.get("q", 0), monomial.get("N", 0), pairs)
    q, n, vs = monomial
    return a.coefficient(q, n, vs)
