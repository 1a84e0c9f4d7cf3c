"""Planar loop equations of the four-matrix chain as a linear system, its
degeneracy locus, the resulting spectral-curve polynomial, and the moment
recursions for resolvent insertions of the third matrix.

Correlators are written ``<X>`` for the planar limit of ``(1/N) <tr X>``.
Unknown moments are sympy symbols registered in :data:`BRACKETS` with the
bracket that defines them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import sympy as sp

x, z, y = sp.symbols("x z y")
omega1 = sp.Symbol("omega1")

BRACKETS: dict[sp.Symbol, str] = {}


def unknown(name: str, bracket: str) -> sp.Symbol:
    sym = sp.Symbol(name)
    BRACKETS[sym] = bracket
    return sym


class HardWallError(ValueError):
    pass


def _coeffs(raw) -> dict[int, Fraction]:
    if isinstance(raw, Mapping):
        items = raw.items()
    else:  # list indexed by power, starting at 0
        items = enumerate(raw)
    out = {}
    for k, v in items:
        v = Fraction(v) if not isinstance(v, sp.Basic) else v
        if v != 0:
            out[int(k)] = v
    return out


@dataclass
class ChainModel:
    """Potentials as {power: coefficient} maps (negative powers allowed)."""

    V: dict
    U: dict
    gamma2: Fraction
    gamma3: Fraction
    N: object = None

    def __post_init__(self):
        self.V = _coeffs(self.V)
        self.U = _coeffs(self.U)
        self.gamma2 = Fraction(self.gamma2)
        self.gamma3 = Fraction(self.gamma3)
        for name, pot in (("V", self.V), ("U", self.U)):
            if not pot or max(pot) < 1:
                raise ValueError(f"potential {name} needs positive polynomial degree")
        if self.gamma3 <= 0:
            raise ValueError("gamma3 must be positive")
        if self.gamma2 == self.gamma3:
            raise HardWallError(
                "gamma2 == gamma3 removes the log term of the second matrix; "
                "this is the hard-wall regime and is not supported"
            )
        if self.gamma2 < self.gamma3:
            raise ValueError("gamma2 must exceed gamma3")

    @property
    def degV(self) -> int:
        return max(self.V)

    @property
    def degU(self) -> int:
        return max(self.U)

    @property
    def gap(self) -> Fraction:
        return self.gamma2 - self.gamma3

    def is_polynomial(self) -> bool:
        return min(self.V) >= 0 and min(self.U) >= 0

    @staticmethod
    def _expr(pot, var):
        return sum(sp.Rational(c.numerator, c.denominator) * var**k if isinstance(c, Fraction) else c * var**k
                   for k, c in pot.items())

    def V_expr(self, var=x):
        return self._expr(self.V, var)

    def U_expr(self, var=z):
        return self._expr(self.U, var)

    def Vp(self, var=x):
        return sp.diff(self.V_expr(var), var)

    def Up(self, var=z):
        return sp.diff(self.U_expr(var), var)

    def decays(self) -> bool:
        """Top couplings negative: the weight decays along the positive axis."""
        return self.V[self.degV] < 0 and self.U[self.degU] < 0


# -- elementary building blocks --------------------------------------------

def build_rs(model: ChainModel, om=omega1):
    s = om + model.Vp(x)
    r = sp.expand(x * s + sp.Rational(model.gap.numerator, model.gap.denominator))
    return r, sp.expand(s)


def system_matrix(r, s, zz=z):
    """Coefficient matrix of the planar system; unknown vector ordered (a, d, c).

    a = <(1/(x-M1)) D>, c = <M3 (1/(x-M1)) D>, d = <M2 (1/(x-M1)) D> with D the
    divided difference (U'(M4)-U'(z))/(M4-z).
    """
    return sp.Matrix([[r, 0, zz], [0, 1, r], [1, s, 0]])


UNKNOWN_ORDER = ("a", "d", "c")


def system_rhs(xP, Qh, insertion, xPh_plus_Qhh, Phh):
    return sp.Matrix([-xP - Qh + insertion, -xPh_plus_Qhh, -Phh])


def degeneracy_locus(r, s):
    return sp.expand(-r**2 * s)


def null_covector(r, s):
    return sp.Matrix([[1, r * s, -r]])


# -- unknown polynomials ---------------------------------------------------

@dataclass
class UnknownPolys:
    P: sp.Expr
    Qh: sp.Expr
    Ph: sp.Expr
    Phh: sp.Expr
    Qhh: sp.Expr
    symbols: list = field(default_factory=list)


def _bipoly(name, degx, degz, bracket):
    syms, expr = [], 0
    for i in range(degx + 1):
        for j in range(degz + 1):
            s = unknown(f"{name}_{i}_{j}", bracket)
            syms.append(s)
            expr += s * x**i * z**j
    return expr, syms


def _zpoly(name, degz, bracket):
    syms, expr = [], 0
    for j in range(degz + 1):
        s = unknown(f"{name}_{j}", bracket)
        syms.append(s)
        expr += s * z**j
    return expr, syms


def unknown_polynomials(model: ChainModel) -> UnknownPolys:
    """Polynomials of x-degree degV-2 and z-degree degU-2 with symbolic coefficients."""
    if not model.is_polynomial():
        raise NotImplementedError("curve emission handles polynomial potentials only")
    dv, du = model.degV - 2, model.degU - 2
    if dv < 0 or du < 0:
        raise ValueError("both potentials need degree at least 2")
    DD = "(U'(M4)-U'(z))/(M4-z)"
    DV = "(V'(M1)-V'(x))/(x-M1)"
    P, s1 = _bipoly("P", dv, du, f"<{DD} {DV}>")
    Qh, s2 = _zpoly("Qh", du, f"<{DD} M2^-1>")
    Ph, s3 = _bipoly("Ph", dv, du, f"<{DD} {DV} M3>")
    Phh, s4 = _bipoly("Phh", dv, du, f"<{DD} {DV} M2>")
    Qhh, s5 = _zpoly("Qhh", du, f"<{DD} M3 M2^-1>")
    return UnknownPolys(P, Qh, Ph, Phh, Qhh, s1 + s2 + s3 + s4 + s5)


def R_poly(model: ChainModel, k: int, r: int):
    """R_{k,r}(x) = <(V'(x)-V'(M1))/(x-M1) M3^k M2^r>, degree degV-2 in x."""
    expr = 0
    for j in range(model.degV - 1):
        expr += unknown(f"R_{k}_{r}_{j}", f"<(V'(x)-V'(M1))/(x-M1) M3^{k} M2^{r}> coefficient of x^{j}") * x**j
    return expr


def C_const(k: int):
    return unknown(f"C_{k}", f"<M3^{k} M2^-1>")


# -- recursions --------------------------------------------------------------

CONVENTIONS = ("derived", "plus")


def f_k0_solve(k: int, model: ChainModel, om=omega1, convention: str = "derived"):
    """f_{k,0}(x) = <(1/(x-M1)) M3^k> through the k-step recursion.

    ``derived``: r s f_k = f_{k-1} - R_{k-1,1} + s (x R_{k,0} - C_k), which is what
    eliminating the neighbours from the two first-order relations gives when R
    is the divided difference (V'(x)-V'(M1))/(x-M1).
    ``plus``: r s f_k = f_{k-1} + R_{k-1,1} + s (x R_{k,0} + C_k).
    Returns a cancelled rational expression.
    """
    if k < 0:
        raise ValueError("only k >= 0 is supported")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention}")
    r, s = build_rs(model, om)
    f = om
    sign = -1 if convention == "derived" else 1
    for j in range(1, k + 1):
        num = f + sign * R_poly(model, j - 1, 1) + s * (x * R_poly(model, j, 0) + sign * C_const(j))
        f = sp.cancel(num / (r * s))
    return f


def as_fraction(expr):
    """(numerator, denominator) with common factors removed."""
    return sp.fraction(sp.cancel(sp.together(expr)))


def spectral_curve(model: ChainModel, om=omega1, f1=None, f2=None, convention: str = "derived",
                   unknowns: UnknownPolys | None = None):
    """Solvability condition of the degenerate system, z eliminated.

    Returns the expression
    -xP - Qh + f2 + f1 U'(z) + r Phh - s r (x Ph + Qhh) at z = -r^2 s.
    """
    up = unknowns or unknown_polynomials(model)
    r, s = build_rs(model, om)
    if f1 is None:
        f1 = f_k0_solve(1, model, om, convention)
    if f2 is None:
        f2 = f_k0_solve(2, model, om, convention)
    expr = (-x * up.P - up.Qh + f2 + f1 * model.Up(z) + r * up.Phh
            - s * r * (x * up.Ph + up.Qhh))
    return expr.subs(z, degeneracy_locus(r, s))


def curve_in_xy(model: ChainModel, convention: str = "derived", unknowns: UnknownPolys | None = None):
    """The curve as a polynomial E(x, y) with y = omega1 + V'(x).

    The rational expression is multiplied by (y (x y + gamma2 - gamma3))^2,
    which clears the denominators from the two recursion steps.
    """
    yy = y - model.Vp(x)
    expr = spectral_curve(model, yy, convention=convention, unknowns=unknowns)
    gap = sp.Rational(model.gap.numerator, model.gap.denominator)
    return sp.expand(sp.cancel(expr * (y * (x * y + gap)) ** 2))


def contraction_identity(model: ChainModel, convention: str = "derived"):
    """(1, r s, -r) . RHS minus the emitted curve; identically zero."""
    up = unknown_polynomials(model)
    r, s = build_rs(model)
    f1 = f_k0_solve(1, model, convention=convention)
    f2 = f_k0_solve(2, model, convention=convention)
    rhs = system_rhs(x * up.P, up.Qh, f2 + f1 * model.Up(z), x * up.Ph + up.Qhh, up.Phh)
    zz = degeneracy_locus(r, s)
    contracted = (null_covector(r, s) * rhs)[0, 0].subs(z, zz)
    curve = spectral_curve(model, f1=f1, f2=f2, unknowns=up)
    return sp.simplify(contracted - curve)


def rank_at_locus(r=None, s=None) -> int:
    r = sp.Symbol("r") if r is None else r
    s = sp.Symbol("s") if s is None else s
    return system_matrix(r, s, degeneracy_locus(r, s)).rank(simplify=True)


def rec_identities_check() -> dict:
    """Eliminate f_{k-1,1} and f_{k,-1} from the first-order relations and compare
    the resulting formula for r s f_{k,0} with the all-plus three-term recursion.

    Each coefficient is reported for: elimination with R as (V'(x)-V'(M1))/(x-M1)
    (sign taken from the variation of the action), elimination with the
    first-order relation taken with +R, and the all-plus recursion.
    """
    s, xx, g = sp.symbols("s x g")
    f_km1_0, f_km1_1, f_k_m1, f_k0 = sp.symbols("f_km1_0 f_km1_1 f_k_m1 f_k0")
    R_km1_1, R_k0, C_k = sp.symbols("R_km1_1 R_k0 C_k")
    r = xx * s + g

    def eliminate(sign_R):
        # s f_{k',r'} + sign_R R_{k',r'} + f_{k',r'-1} = 0
        e1 = s * f_km1_1 + sign_R * R_km1_1 + f_km1_0
        e2 = s * f_k0 + sign_R * R_k0 + f_k_m1
        e3 = C_k - xx * f_k_m1 + f_km1_1 + g * f_k0
        sol = sp.solve([e1, e2, e3], [f_km1_1, f_k_m1, f_k0], dict=True)[0]
        return sp.expand(sp.cancel(sol[f_k0] * r * s))

    plus = f_km1_0 + R_km1_1 + s * (xx * R_k0 + C_k)
    forms = {"derived": eliminate(-1), "plus_first_order": eliminate(+1), "plus_recursion": sp.expand(plus)}
    probes = {
        "f_{k-1,0}": f_km1_0,
        "R_{k-1,1}": R_km1_1,
        "s*x*R_{k,0}": s * xx * R_k0,
        "s*C_k": s * C_k,
    }
    report = {"lhs": "r*s*f_{k,0}", "terms": {}}
    for label, mono in probes.items():
        row = {name: _coeff(expr, mono) for name, expr in forms.items()}
        row["agree"] = len(set(row.values())) == 1
        report["terms"][label] = row
    report["consistent"] = all(v["agree"] for v in report["terms"].values())
    report["forms"] = {k: str(v) for k, v in forms.items()}
    return report


def _coeff(expr, mono) -> str:
    """Coefficient of a monomial in a polynomial expression, as a string."""
    gens = sorted(expr.free_symbols | mono.free_symbols, key=str)
    poly = sp.Poly(sp.expand(expr), *gens)
    ((monom, _),) = sp.Poly(mono, *gens).terms()
    return str(poly.coeff_monomial(monom))


# -- substitution table -----------------------------------------------------

DERIVATION_TABLE = [
    {"step": 1, "equation": "i", "insertion": "D", "result": "s*a + P + b = 0"},
    {"step": 2, "equation": "ii", "insertion": "D", "result": "-<(M1/(x-M1)) D M2^-1> + <M3^-1 M2 (1/(x-M1)) D> + gap*a = 0"},
    {"step": 3, "equation": "iii", "insertion": "D", "result": "<M3^-1 M2 (1/(x-M1)) D> = <(1/(x-M1)) D M4 M3>"},
    {"step": 4, "equation": "i", "insertion": "D*M3", "result": "s*c + Ph + b + <M3 M2^-1 (1/(x-M1)) D> = 0"},
    {"step": 5, "equation": "ii", "insertion": "D*M3", "result": "-<(M1/(x-M1)) D M3 M2^-1> + d + gap*c = 0"},
    {"step": 6, "equation": "i", "insertion": "D*M2", "result": "s*d + Phh + a = 0"},
]


# -- emission ------------------------------------------------------------------

def emit(model: ChainModel, fmt: str = "json", convention: str = "derived") -> str:
    up = unknown_polynomials(model)
    E = curve_in_xy(model, convention, unknowns=up)
    rsyms = sorted((s for s in E.free_symbols if s not in (x, y)), key=str)
    if fmt == "latex":
        return sp.latex(sp.collect(E, y)) + "\n"
    if fmt != "json":
        raise ValueError(f"unknown format {fmt}")
    poly = sp.Poly(E, x, y)
    terms = [{"x": int(i), "y": int(j), "coeff": str(c)} for (i, j), c in sorted(poly.terms())]
    doc = {
        "degV": model.degV,
        "degU": model.degU,
        "gamma2": str(model.gamma2),
        "gamma3": str(model.gamma3),
        "convention": convention,
        "variables": {"y": "omega1(x) + V'(x)", "cleared_denominator": "(y*(x*y + gamma2 - gamma3))^2"},
        "unknowns": [{"name": str(s), "bracket": BRACKETS.get(s, "")} for s in rsyms],
        "terms": terms,
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"
