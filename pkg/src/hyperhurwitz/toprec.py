"""Eynard-Orantin recursion on rational (genus-zero) spectral curves.

Conventions used throughout:

* omega_{0,1} = y dx, omega_{0,2} = dw1 dw2/(w1 - w2)^2;
* kernel K(w0, w) = (1/2) [1/(w0 - s(w)) - 1/(w0 - w)] dw0 / ((y(w) - y(s(w))) dx(w)),
  i.e. half the integral of omega_{0,2}(w0, .) from w to s(w), s being the local deck
  involution at a zero of dx; with this orientation omega_{0,3} = sum_a Res B B B/(dx dy);
* omega_{g,n+1}(w0, J) = sum over zeros a of dx of Res_{w->a} K(w0, w) [ ... ];
* F_g = 1/(2 - 2g) sum_a Res_{w->a} Phi(w) omega_{g,1}(w), dPhi = y dx.

Stable correlators are stored as finite sums of products of 1/(w_j - a)^k over
branch points a, so evaluation and comparison are exact in the coefficient field
of the curve (Fraction for exact curves, mpmath numbers otherwise). Residues are
read off truncated Laurent jets in the local coordinate t = w - a.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

import mpmath as mp
import sympy as sp

DEFAULT_ORDER = 16


class DegenerateBranchPoint(ValueError):
    pass


class InsufficientOrder(RuntimeError):
    pass


# -- numbers ------------------------------------------------------------------

def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction))


def _as_mp(c):
    return mp.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else c


def _zero_like(c):
    return Fraction(0) if _is_exact(c) else mp.mpf(0)


def _scale(c: list):
    # leading terms only: late jet coefficients grow like the inverse radius of convergence
    return max(abs(t) for t in c[:4]) or 1


def _negligible(c, scale) -> bool:
    if _is_exact(c):
        return c == 0
    return abs(c) <= scale * mp.mpf(10) ** (-(mp.mp.dps - 8))


# -- truncated Laurent jets ----------------------------------------------------

class Jet:
    """sum c[i] t^(val + i), known up to and including power val + len(c) - 1."""

    __slots__ = ("val", "c")

    def __init__(self, val: int, c: list):
        self.val = val
        self.c = list(c)

    @property
    def hi(self) -> int:
        return self.val + len(self.c) - 1

    @classmethod
    def monomial(cls, power: int, coef, length: int):
        z = _zero_like(coef)
        return cls(power, [coef] + [z] * (length - 1))

    def coef(self, p):
        if p < self.val:
            return 0
        if p > self.hi:
            raise InsufficientOrder(f"coefficient t^{p} requested, jet known to t^{self.hi}")
        return self.c[p - self.val]

    def truncate(self, hi: int) -> "Jet":
        return Jet(self.val, self.c[: max(0, hi - self.val + 1)])

    def normalize(self) -> "Jet":
        if not self.c:
            return self
        scale = _scale(self.c)
        k = 0
        while k < len(self.c) and _negligible(self.c[k], scale):
            k += 1
        return Jet(self.val + k, self.c[k:])

    def __add__(self, other: "Jet") -> "Jet":
        lo, hi = min(self.val, other.val), min(self.hi, other.hi)
        out = []
        for p in range(lo, hi + 1):
            a = self.c[p - self.val] if self.val <= p <= self.hi else 0
            b = other.c[p - other.val] if other.val <= p <= other.hi else 0
            out.append(a + b)
        return Jet(lo, out)

    def __neg__(self):
        return Jet(self.val, [-t for t in self.c])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "Jet":
        return Jet(self.val, [k * t for t in self.c])

    def mul(self, other: "Jet", hi: int | None = None) -> "Jet":
        val = self.val + other.val
        top = min(self.hi + other.val, other.hi + self.val)
        if hi is not None:
            top = min(top, hi)
        n = top - val + 1
        if n <= 0:
            return Jet(val, [])
        a, b = self.c, other.c
        out = []
        for k in range(n):
            acc = 0
            for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
                acc += a[i] * b[k - i]
            out.append(acc)
        return Jet(val, out)

    __mul__ = mul

    def inv(self) -> "Jet":
        f = self.normalize()
        if not f.c:
            raise InsufficientOrder("cannot invert a jet with no known nonzero term")
        a = f.c
        n = len(a)
        out = [1 / a[0]]
        for k in range(1, n):
            acc = 0
            for i in range(1, k + 1):
                acc += a[i] * out[k - i]
            out.append(-acc / a[0])
        return Jet(-f.val, out)

    def pow(self, k: int) -> "Jet":
        if k < 0:
            return self.inv().pow(-k)
        r = Jet.monomial(0, _one_like(self), len(self.c))
        for _ in range(k):
            r = r.mul(self)
        return r

    def deriv(self) -> "Jet":
        if self.val == 0:
            return Jet(0, [i * t for i, t in enumerate(self.c)][1:])
        return Jet(self.val - 1, [(self.val + i) * t for i, t in enumerate(self.c)])

    def integrate(self) -> "Jet":
        """Primitive with zero constant term; a t^-1 term is an error."""
        if self.val <= -1 <= self.hi:
            r = self.coef(-1)
            if not _negligible(r, _scale(self.c)):
                raise ValueError("primitive has a logarithmic term at this point")
        out = [t / (self.val + 1 + i) if self.val + i != -1 else 0 * t for i, t in enumerate(self.c)]
        return Jet(self.val + 1, out)


def _one_like(j: Jet):
    return Fraction(1) if (not j.c or _is_exact(j.c[0])) else mp.mpf(1)


# -- polynomials (low degree first) --------------------------------------------

def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, s in enumerate(a):
        for j, t in enumerate(b):
            out[i + j] += s * t
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pderiv(a):
    return [i * c for i, c in enumerate(a)][1:] or [0]


def _peval(a, w):
    acc = 0
    for c in reversed(a):
        acc = acc * w + c
    return acc


def _pshift(a, s):
    """Coefficients of a(s + t) in t."""
    n = len(a)
    return [sum(a[k] * comb(k, j) * s ** (k - j) for k in range(j, n)) for j in range(n)]


def _compose_affine(a, alpha, beta):
    """a(alpha u + beta) as a polynomial in u."""
    out = [0]
    power = [1]
    for c in a:
        out = _padd(out, [c * t for t in power])
        power = _pmul(power, [beta, alpha])
    return out


def _rational_jet(num, den, a, length):
    """Laurent jet of num/den at w = a (t = w - a)."""
    n = Jet(0, (_pshift(num, a) + [0] * length)[:length + 8]).normalize()
    d = Jet(0, (_pshift(den, a) + [0] * length)[:length + 8]).normalize()
    n = Jet(n.val, n.c[:length])
    d = Jet(d.val, d.c[:length])
    return n.mul(d.inv())


# -- curves --------------------------------------------------------------------

@dataclass
class RationalCurve:
    """x = xn/xd, y = yn/yd with coefficients listed from degree 0 upward."""

    xn: list
    xd: list
    yn: list
    yd: list

    def x(self, w):
        return _peval(self.xn, w) / _peval(self.xd, w)

    def y(self, w):
        return _peval(self.yn, w) / _peval(self.yd, w)

    @property
    def exact(self) -> bool:
        return all(_is_exact(c) for c in self.xn + self.xd + self.yn + self.yd)

    def dx_numerator(self):
        return _padd(_pmul(_pderiv(self.xn), self.xd), [-c for c in _pmul(self.xn, _pderiv(self.xd))])

    def affine(self, alpha, beta) -> "RationalCurve":
        """Curve in u with w = (u - beta)/alpha."""
        ia = 1 / alpha if not _is_exact(alpha) else Fraction(1) / alpha
        return RationalCurve(*(_compose_affine(p, ia, -beta * ia) for p in (self.xn, self.xd, self.yn, self.yd)))


def airy_curve() -> RationalCurve:
    return RationalCurve([0, 0, Fraction(1, 2)], [Fraction(1)], [0, Fraction(1)], [Fraction(1)])


def from_spectral_curve(curve) -> RationalCurve:
    """Adapter for a solved chain curve (mpmath coefficients)."""
    with mp.workdps(curve.dps):
        xn, xd = curve.x_rational()
        yn, yd = curve.y_rational()
        return RationalCurve([mp.mpf(c) for c in xn], [mp.mpf(c) for c in xd],
                             [mp.mpf(c) for c in yn], [mp.mpf(c) for c in yd])


def branch_points(curve: RationalCurve) -> list:
    """Simple zeros of dx/dw at finite w (poles of x excluded)."""
    num = list(curve.dx_numerator())
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    if curve.exact:
        w = sp.Symbol("w")
        poly = sp.Poly(sum(sp.Rational(c.numerator, c.denominator) * w**i for i, c in enumerate(map(Fraction, num))), w)
        roots = []
        for r, mult in sp.roots(poly, multiple=False).items():
            if sp.Poly(sum(sp.Rational(Fraction(c).numerator, Fraction(c).denominator) * w**i
                           for i, c in enumerate(curve.xd)), w).eval(r) == 0:
                continue
            if mult > 1:
                raise DegenerateBranchPoint(f"dx has a zero of order {mult} at w = {r}")
            if r.is_rational:
                roots.append(Fraction(int(r.p), int(r.q)))
            else:
                raise ValueError("exact curve has irrational branch points; supply float coefficients")
        return sorted(roots)
    k = 0
    while k < len(num) and num[k] == 0:
        k += 1
    stripped = num[k:]
    roots = mp.polyroots(list(reversed(stripped)), maxsteps=500, extraprec=4 * mp.mp.prec) if len(stripped) > 1 else []
    roots = [mp.re(r) if abs(mp.im(r)) < mp.mpf(10) ** (-(mp.mp.dps // 2)) else r for r in roots]
    if k and abs(_peval(curve.xd, 0)) > 0:
        raise DegenerateBranchPoint(f"dx has a zero of order {k} at w = 0")
    out = []
    tol = mp.mpf(10) ** (-(mp.mp.dps // 3))
    for r in roots:
        if abs(_peval(curve.xd, r)) < tol:
            continue
        out.append(r)
    for i, r in enumerate(out):
        for q in out[i + 1:]:
            if abs(r - q) < tol:
                raise DegenerateBranchPoint(f"dx has a repeated zero near w = {mp.nstr(r, 10)}")
    return sorted(out, key=lambda r: (mp.re(r), mp.im(r)))


# -- per-branch-point data --------------------------------------------------

class _Local:
    def __init__(self, curve: RationalCurve, a, order: int):
        self.a = a
        self.L = order
        L = order
        X = _rational_jet(curve.xn, curve.xd, a, L + 2)
        self.x0 = X.coef(0)
        Xc = Jet(2, [X.coef(p) for p in range(2, X.hi + 1)])
        self.Xp = _rational_jet(_pderiv_rational_num(curve), _pmul(curve.xd, curve.xd), a, L)
        self.Y = _rational_jet(curve.yn, curve.yd, a, L)
        self.s = _involution(Xc, L)
        self.sp = self.s.deriv()
        self.sinv = self.s.inv()
        self.one = _one_like(self.s)
        Ys = _compose(self.Y, self.s, self.sinv, L)
        den = (self.Y - Ys).normalize().mul(self.Xp)
        self.K0 = den.inv()
        self._cache = {}

    def t_pow(self, m):
        return Jet.monomial(m, self.one, self.L)

    def s_pow(self, m):
        key = ("s", m)
        if key not in self._cache:
            self._cache[key] = self.s.pow(m) if m >= 0 else self.sinv.pow(-m)
        return self._cache[key]

    def A(self, m):
        key = ("A", m)
        if key not in self._cache:
            self._cache[key] = (self.s_pow(m) - self.t_pow(m)).normalize().mul(self.K0).scale(self.one / 2)
        return self._cache[key]

    def basis(self, b_point, k, side, same):
        """Jet of 1/(w - b)^k at w = a + t (side 0) or w = a + s(t) times s' (side 1)."""
        key = ("b", b_point if not same else "self", k, side)
        if key in self._cache:
            return self._cache[key]
        if same:
            j = self.t_pow(-k) if side == 0 else self.s_pow(-k).mul(self.sp)
        else:
            c = self.a - b_point
            taylor = Jet(0, [_binom_neg(k, i) * c ** (-k - i) for i in range(self.L)])
            j = taylor if side == 0 else _compose(taylor, self.s, self.sinv, self.L).mul(self.sp)
        self._cache[key] = j
        return j

    def bergman_expansion(self, side):
        """1/(w_j - w)^2 dw at w = a + t: list of (m + 2, jet) pairs, coefficient of 1/(w_j - a)^(m+2)."""
        key = ("B", side)
        if key not in self._cache:
            terms = []
            for m in range(self.L):
                base = self.t_pow(m) if side == 0 else self.s_pow(m).mul(self.sp)
                terms.append((m + 2, base.scale((m + 1) * self.one)))
            self._cache[key] = terms
        return self._cache[key]

    def bergman_self(self):
        """s'(t)/(t - s(t))^2."""
        key = ("Bs",)
        if key not in self._cache:
            d = (self.t_pow(1) - self.s).normalize()
            self._cache[key] = d.mul(d).inv().mul(self.sp)
        return self._cache[key]


def _binom_neg(k, i):
    """coefficient of c^(-k-i) t^i in (c + t)^(-k)."""
    return (-1) ** i * comb(k + i - 1, i)


def _pderiv_rational_num(curve):
    return _padd(_pmul(_pderiv(curve.xn), curve.xd), [-c for c in _pmul(curve.xn, _pderiv(curve.xd))])


def _compose(f: Jet, s: Jet, sinv: Jet, L: int) -> Jet:
    """f(s(t)) for a Laurent jet f and s of valuation one."""
    acc = None
    pw = s.pow(f.val) if f.val >= 0 else sinv.pow(-f.val)
    for i, c in enumerate(f.c):
        term = pw.scale(c)
        acc = term if acc is None else acc + term
        pw = pw.mul(s)
    return acc.truncate(f.val + L - 1) if acc is not None else Jet(0, [])


def _involution(Xc: Jet, L: int) -> Jet:
    """s(t) = -t + O(t^2) with x(a + s) = x(a + t); Xc = x(a + t) - x(a), val 2."""
    if Xc.val != 2 or _negligible(Xc.c[0], _scale(Xc.c)):
        raise DegenerateBranchPoint("dx vanishes to higher order at a branch point")
    x2 = Xc.c[0]
    one = 1 if _is_exact(x2) else mp.mpf(1)
    t = Jet.monomial(1, Fraction(1) if _is_exact(x2) else mp.mpf(1), L)
    s = (-t).truncate(L)
    if Xc.hi < L + 1:
        raise InsufficientOrder("curve jet too short for the requested involution order")
    for _ in range(L + 1):
        acc = Jet(1, [0 * one] * L)
        # sum_{k>=3} x_k (s^k - t^k)/(s - t) = sum_k x_k sum_j s^j t^(k-1-j)
        spow = [Jet.monomial(0, one, L + 1)]
        for k in range(3, L + 2):
            xk = Xc.coef(k) if k <= Xc.hi else 0
            while len(spow) < k:
                spow.append(spow[-1].mul(s))
            if xk == 0:
                continue
            h = None
            for j in range(k):
                term = spow[j].mul(Jet.monomial(k - 1 - j, one, L + 1))
                h = term if h is None else h + term
            acc = acc + h.scale(xk)
        s = (-t - acc.scale(one / x2)).truncate(L)
    return s


# -- correlators ---------------------------------------------------------------

@dataclass
class CorrelatorTable:
    curve: RationalCurve
    points: list
    order: int
    omega: dict = field(default_factory=dict)  # (g, n) -> {labels: coef}, label = (point index, k)

    def evaluate(self, g: int, n: int, ws) -> object:
        """Coefficient function of omega_{g,n} at parameter values ws (dw factors dropped)."""
        if (g, n) == (0, 1):
            w = ws[0]
            return self.curve.y(w) * (
                (_peval(_pderiv_rational_num(self.curve), w)) / _peval(self.curve.xd, w) ** 2
            )
        if (g, n) == (0, 2):
            return 1 / (ws[0] - ws[1]) ** 2
        exact = all(_is_exact(w) for w in ws)
        pts = self.points if exact else [_as_mp(p) for p in self.points]
        ws = ws if exact else [_as_mp(w) for w in ws]
        tot = 0
        for labels, c in self.omega[(g, n)].items():
            term = c if exact else _as_mp(c)
            for (b, k), w in zip(labels, ws):
                term = term / (w - pts[b]) ** k
            tot += term
        return tot

    def residue(self, g: int, n: int, slot: int, point: int, others, radius=None, samples: int = 64):
        """Contour integral of omega_{g,n} in one slot around a branch point, by trapezoid rule."""
        a = _as_mp(self.points[point])
        r = radius or _min_gap(self.points, point) * mp.mpf("0.25")
        tot = 0
        for j in range(samples):
            e = r * mp.expjpi(mp.mpf(2 * j + 1) / samples)
            args = list(others)
            args.insert(slot, a + e)
            tot += self.evaluate(g, n, args) * e
        return tot / samples

    def to_json(self) -> dict:
        def fmt(c):
            if _is_exact(c):
                return str(Fraction(c))
            return mp.nstr(c, mp.mp.dps - 5)

        return {
            "conventions": {
                "omega01": "y dx",
                "omega02": "dw1 dw2/(w1-w2)^2",
                "kernel": "(1/2)[1/(w0-s(w)) - 1/(w0-w)] dw0/((y(w)-y(s(w))) dx(w))",
                "basis": "labels [i, k] mean 1/(w - branch_points[i])^k",
            },
            "branch_points": [fmt(p) for p in self.points],
            "order": self.order,
            "omega": {
                f"{g},{n}": [[[list(l) for l in labels], fmt(c)] for labels, c in sorted(tab.items())]
                for (g, n), tab in sorted(self.omega.items())
            },
        }


def _min_gap(points, i):
    others = [abs(points[i] - p) for j, p in enumerate(points) if j != i]
    return min(others) if others else mp.mpf(1)


def _local_expand(table: CorrelatorTable, loc: _Local, pidx: int, g: int, n: int, side: int):
    """omega_{g,n}(w, z_1..z_{n-1}) with w = a + t (or s(t)): {labels over z: jet}."""
    if (g, n) == (0, 2):
        return {((pidx, k),): j for k, j in loc.bergman_expansion(side)}
    out: dict = {}
    for labels, c in table.omega[(g, n)].items():
        (b, k), rest = labels[0], labels[1:]
        j = loc.basis(table.points[b], k, side, b == pidx).scale(c)
        out[rest] = out[rest] + j if rest in out else j
    return out


def _product(d1: dict, pos1, d2: dict, pos2, nJ: int, hi: int) -> dict:
    out: dict = {}
    for l1, j1 in d1.items():
        for l2, j2 in d2.items():
            if j1.val + j2.val > hi:
                continue
            lab = [None] * nJ
            for p, l in zip(pos1, l1):
                lab[p] = l
            for p, l in zip(pos2, l2):
                lab[p] = l
            lab = tuple(lab)
            j = j1.mul(j2, hi)
            out[lab] = out[lab] + j if lab in out else j
    return out


def _recurse_one(table: CorrelatorTable, locs, g: int, nJ: int) -> dict:
    """omega_{g, nJ+1} from lower terms."""
    res: dict = {}
    J = list(range(nJ))
    for pidx, loc in enumerate(locs):
        vK = loc.K0.val
        hi = -2 - vK  # A_m has valuation >= m + vK, so Res needs powers up to -1 - (1 + vK)
        stuff: dict = {}

        def acc(d):
            for k, v in d.items():
                stuff[k] = stuff[k] + v if k in stuff else v

        # omega_{g-1, nJ+2}(w, s(w), J)
        if g >= 1:
            if (g - 1, nJ + 2) == (0, 2):
                acc({(): loc.bergman_self()})
            else:
                for labels, c in table.omega[(g - 1, nJ + 2)].items():
                    (b0, k0), (b1, k1), rest = labels[0], labels[1], labels[2:]
                    j = loc.basis(table.points[b0], k0, 0, b0 == pidx).mul(
                        loc.basis(table.points[b1], k1, 1, b1 == pidx), hi).scale(c)
                    if j.val > hi:
                        continue
                    acc({rest: j})
        # sum over splittings, omega_{0,1} excluded
        for h in range(g + 1):
            for r in range(nJ + 1):
                for I in combinations(J, r):
                    rest = tuple(i for i in J if i not in I)
                    if (h, len(I)) == (0, 0) or (g - h, len(rest)) == (0, 0):
                        continue
                    d1 = _local_expand(table, loc, pidx, h, len(I) + 1, 0)
                    d2 = _local_expand(table, loc, pidx, g - h, len(rest) + 1, 1)
                    acc(_product(d1, I, d2, rest, nJ, hi))
        for lab, jet in stuff.items():
            jet = jet.normalize() if jet.c else jet
            if not jet.c:
                continue
            need = -1 - jet.val  # highest power of A_m needed
            for m in range(1, need - vK + 1):
                Am = loc.A(m)
                if Am.hi < need:
                    raise InsufficientOrder(
                        f"jet order {loc.L} too small for omega_{g},{nJ + 1} at branch point {pidx}")
                if not Am.c or Am.val > need:
                    continue
                if jet.hi < -1 - Am.val:
                    raise InsufficientOrder(
                        f"jet order {loc.L} too small for omega_{g},{nJ + 1} at branch point {pidx}")
                v = 0
                for p in range(Am.val, need + 1):
                    v += Am.coef(p) * jet.coef(-1 - p)
                key = ((pidx, m + 1),) + lab
                res[key] = res.get(key, 0) + v
    return {k: v for k, v in res.items() if not (_is_exact(v) and v == 0)}


def correlator_range(g_max: int, n_max: int) -> int:
    """Largest 2g - 2 + n computed: enough for omega_{g_max,1} and omega_{0,n_max}."""
    return max(2 * g_max - 1, n_max - 2)


def recurse(curve: RationalCurve, g_max: int, n_max: int, order: int = DEFAULT_ORDER) -> CorrelatorTable:
    """All stable omega_{g,n} with g <= g_max and 2g - 2 + n <= correlator_range(g_max, n_max)."""
    pts = branch_points(curve)
    locs = [_Local(curve, a, order) for a in pts]
    table = CorrelatorTable(curve=curve, points=pts, order=order)
    cap = correlator_range(g_max, n_max)
    for chi in range(1, cap + 1):
        for g in range(0, chi // 2 + 2):
            n = chi - 2 * g + 2
            if n < 1 or g > g_max:
                continue
            table.omega[(g, n)] = _recurse_one(table, locs, g, n - 1)
    table._locs = locs
    return table


def omega03_direct(curve: RationalCurve, points=None) -> dict:
    """Sum over a of Res B(w,w1)B(w,w2)B(w,w3)/(dx dy): coefficient 1/(x''(a) y'(a)) on 1/(w_j - a)^2."""
    pts = branch_points(curve) if points is None else points
    out = {}
    for i, a in enumerate(pts):
        X = _rational_jet(curve.xn, curve.xd, a, 4)
        Y = _rational_jet(curve.yn, curve.yd, a, 4)
        x2 = 2 * X.coef(2)
        y1 = Y.coef(1)
        if Y.val < 0:
            # y singular at the branch point: take the residue from jets
            Xp = _rational_jet(_pderiv_rational_num(curve), _pmul(curve.xd, curve.xd), a, 8)
            inv = Xp.mul(Y.deriv()).inv()
            out[((i, 2), (i, 2), (i, 2))] = inv.coef(-1)
            continue
        out[((i, 2), (i, 2), (i, 2))] = 1 / (x2 * y1)
    return out


def free_energy(table: CorrelatorTable, g: int, shift=0) -> object:
    """F_g for g >= 2 with Phi(a) = shift at every branch point."""
    if g < 2:
        raise ValueError("free energies below genus two need separate formulas")
    if (g, 1) not in table.omega:
        raise ValueError(f"omega_{g},1 not computed")
    locs = table._locs
    tot = 0
    for pidx, loc in enumerate(locs):
        if not any(lab[0][0] == pidx for lab in table.omega[(g, 1)]):
            continue  # omega_{g,1} is regular here
        try:
            Phi = loc.Y.mul(loc.Xp).integrate()
        except ValueError:
            raise ValueError(
                f"y dx has a pole at branch point {table.points[pidx]}; its primitive has a "
                "logarithm there, so the residue formula for F_g does not apply"
            ) from None
        Phi = Phi + Jet.monomial(0, shift if shift else 0 * loc.one, loc.L) if shift else Phi
        w = _local_expand(table, loc, pidx, g, 1, 0).get((), None)
        if w is None:
            continue
        need_hi = -1 - w.val
        if Phi.hi < need_hi:
            raise InsufficientOrder("primitive jet too short")
        for p in range(Phi.val, need_hi + 1):
            tot += Phi.coef(p) * w.coef(-1 - p)
    return tot / (2 - 2 * g)
