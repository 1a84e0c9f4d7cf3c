"""Genus-zero solution of the Gaussian chain spectral curve.

With quadratic V and U the first and last matrices can be integrated out,
leaving a two-matrix model in X = M2 and W = M3^-1 with coupling tr X W and
potentials

    A(X) = -(v1 + 1/X)^2/(2 v2) + (g2 - 2 g3) log X,
    B(W) = -(u1 + 1/W)^2/(2 u2) - g3 log W.

Its one-cut planar solution is a pair of rational functions xi(w), eta(w) on
the sphere with

    xi(w)  = G (w - q0)(w - q1)^2 (w - c)/w^3,
    eta(w) = w (n0 + n1 w + n2 w^2)/((w - q1)(w - q0)^3),

subject to: the polar parts of eta - A1(xi) at q0 and of xi - B1(eta) at 0
vanish (A1 = -A', B1 = -B'), and n2 = -(g2 - g3)/G, which removes the pole of
x at w = infinity. q0 = 1 fixes the scaling freedom.
The chain curve follows from y = -1/xi and x = (g2 - g3) xi + xi^2 eta, and
the unknown moments of the loop-equation polynomial are then read off by a
linear solve, after which E(x(w), y(w)) must vanish identically.
"""
from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
import sympy as sp
from scipy.optimize import least_squares

from . import loopsys
from .loopsys import ChainModel

Q0 = 1
_CONTOUR_POINTS = 64
WORK_DPS = 40


class CurveSolveError(RuntimeError):
    pass


class AnsatzMismatch(CurveSolveError):
    pass


def _gaussian_couplings(model: ChainModel):
    if model.degV != 2 or model.degU != 2 or not model.is_polynomial():
        raise AnsatzMismatch(
            f"the genus-zero ansatz is implemented for quadratic V and U; got degrees {model.degV}, {model.degU}"
        )
    v2 = 2 * model.V[2]
    v1 = model.V.get(1, 0)
    u2 = 2 * model.U[2]
    u1 = model.U.get(1, 0)
    return v2, v1, u2, u1


def check_signs(model: ChainModel) -> None:
    if not model.decays():
        raise CurveSolveError("top couplings of V and U must be negative so the weight decays")


# -- rational maps ----------------------------------------------------------

def _to_mpf(ctx, t):
    if isinstance(t, Fraction):
        return ctx.mpf(t.numerator) / t.denominator
    return ctx.mpf(t)


class _Maps:
    """xi, eta, x, y as functions of w for a parameter vector (G, q1, c, n0, n1)."""

    def __init__(self, p, model: ChainModel, ctx=None):
        self.ctx = ctx
        conv = (lambda t: _to_mpf(ctx, t)) if ctx is not None else float
        self.G, self.q1, self.c, self.n0, self.n1 = (conv(t) for t in p)
        v2, v1, u2, u1 = _gaussian_couplings(model)
        self.v2, self.v1, self.u2, self.u1 = (conv(t) for t in (v2, v1, u2, u1))
        self.g2, self.g3 = conv(model.gamma2), conv(model.gamma3)
        self.gap = self.g2 - self.g3
        self.c2 = self.g2 - 2 * self.g3
        self.n2 = -self.gap / self.G
        self.q0 = conv(Q0)

    def xi(self, w):
        return self.G * (w - self.q0) * (w - self.q1) ** 2 * (w - self.c) / w**3

    def eta(self, w):
        return w * (self.n0 + self.n1 * w + self.n2 * w**2) / ((w - self.q1) * (w - self.q0) ** 3)

    def A1(self, X):
        return -((self.v1 + 1 / X) / (self.v2 * X**2) + self.c2 / X)

    def B1(self, Y):
        return -((self.u1 + 1 / Y) / (self.u2 * Y**2) - self.g3 / Y)

    def x(self, w):
        xi = self.xi(w)
        return self.gap * xi + xi**2 * self.eta(w)

    def y(self, w):
        return -1 / self.xi(w)


def _polar(f, a, rho, orders, ctx=None):
    """Coefficients of (w-a)^-k, k in orders, by the trapezoid rule on a circle."""
    M = _CONTOUR_POINTS
    if ctx is None:
        th = 2 * np.pi * (np.arange(M) + 0.5) / M
        e = rho * np.exp(1j * th)
        vals = f(a + e)
        return [np.mean(vals * e**k) for k in orders]
    out = [ctx.mpc(0)] * len(orders)
    for j in range(M):
        e = rho * ctx.expjpi(2 * (j + ctx.mpf(0.5)) / M)
        v = f(a + e)
        out = [o + v * e**k for o, k in zip(out, orders)]
    return [o / M for o in out]


def conditions(p, model: ChainModel, ctx=None):
    """Six real equations: polar parts at q0 and at 0."""
    m = _Maps(p, model, ctx)
    absf = ctx.fabs if ctx is not None else abs
    d1 = min(absf(m.q1 - m.q0), absf(m.c - m.q0), absf(m.q0))
    d0 = min(absf(m.q1), absf(m.c), absf(m.q0))
    r1 = _polar(lambda w: m.eta(w) - m.A1(m.xi(w)), m.q0, 0.3 * d1, (1, 2, 3), ctx)
    r2 = _polar(lambda w: m.xi(w) - m.B1(m.eta(w)), 0, 0.3 * d0, (1, 2, 3), ctx)
    vals = r1 + r2
    if ctx is None:
        return np.array([v.real for v in vals])
    return [ctx.re(v) for v in vals]


N_PARAMS = 5
N_CONDITIONS = 6
N_SEEDS = 64
MAX_EVALS = 600


def _polish(p, model: ChainModel, dps=WORK_DPS, iters=30):
    """Gauss-Newton at high precision on the overdetermined square-ish system."""
    with mp.workdps(dps):
        ctx = mp.mp
        v = [ctx.mpf(float(t)) for t in p]
        h = ctx.mpf(10) ** (-(dps // 2))
        for _ in range(iters):
            f = ctx.matrix(conditions(v, model, ctx))
            J = ctx.matrix(N_CONDITIONS, N_PARAMS)
            for j in range(N_PARAMS):
                vp = list(v)
                vm = list(v)
                vp[j] += h
                vm[j] -= h
                fp = conditions(vp, model, ctx)
                fm = conditions(vm, model, ctx)
                for i in range(N_CONDITIONS):
                    J[i, j] = (fp[i] - fm[i]) / (2 * h)
            step = ctx.lu_solve(J.T * J, J.T * f)
            v = [v[i] - step[i] for i in range(N_PARAMS)]
            if ctx.norm(step) < ctx.mpf(10) ** (-(dps - 8)):
                break
        res = max(abs(t) for t in conditions(v, model, ctx))
        return v, res


def _seeds(count: int, seed: int):
    rng = np.random.default_rng(seed)
    return [rng.normal(size=N_PARAMS) * 1.5 for _ in range(count)]


def find_real_solutions(model: ChainModel, seeds=None, tol=1e-22):
    """Distinct real solutions of the ansatz conditions reached from the seeds."""
    seeds = _seeds(N_SEEDS, 0) if seeds is None else seeds
    found = []
    with np.errstate(all="ignore"):
        for p0 in seeds:
            try:
                s = least_squares(lambda p: conditions(p, model), p0, method="lm",
                                  max_nfev=MAX_EVALS, xtol=1e-15, ftol=1e-15)
            except (ValueError, ZeroDivisionError, FloatingPointError):
                continue
            if not np.all(np.isfinite(s.x)) or s.cost > tol:
                continue
            if not any(np.allclose(s.x, f, atol=1e-6, rtol=1e-6) for f in found):
                found.append(s.x)
    return found


# -- curve object ----------------------------------------------------------

@dataclass
class SpectralCurve:
    model: ChainModel
    params: list  # mp numbers: G, q1, c, n0, n1
    unknowns: dict = field(default_factory=dict)  # symbol name -> mp value
    cut: tuple = ()
    E: object = None
    dps: int = WORK_DPS
    report: dict = field(default_factory=dict)

    def maps(self, ctx=None):
        return _Maps(self.params, self.model, ctx)

    def x(self, w):
        with mp.workdps(self.dps):
            return self.maps(mp.mp).x(mp.mpmathify(w))

    def y(self, w):
        with mp.workdps(self.dps):
            return self.maps(mp.mp).y(mp.mpmathify(w))

    @property
    def q0(self):
        return Q0

    def x_rational(self):
        """x(w) = num(w)/den(w) as coefficient lists (lowest degree first)."""
        return _x_rational(self)

    def y_rational(self):
        m = self.maps(mp.mp)
        num = [0, 0, 0, -1]  # -w^3
        den = _polymul([-m.q0, 1], _polymul(_polymul([-m.q1, 1], [-m.q1, 1]), [-m.c, 1]))
        den = [m.G * t for t in den]
        return num, den

    def omega1(self, xv, w_guess=None):
        """Resolvent on the physical sheet, found by Newton from a seed near q0."""
        with mp.workdps(self.dps):
            m = self.maps(mp.mp)
            w = mp.mpmathify(w_guess) if w_guess is not None else self.physical_preimage(xv)
            return m.y(w) - _vprime(self.model, mp.mpmathify(xv))

    def physical_preimage(self, xv):
        """Preimage of x on the sheet containing q0 (continuation from x = infinity)."""
        with mp.workdps(self.dps):
            m = self.maps(mp.mp)
            xv = mp.mpmathify(xv)
            res = _residue_at_q0(m)
            # x ~ res/(w - q0) near q0: march 1/x from 0 to 1/xv
            w = m.q0 + res / (xv * 1e6) if abs(xv) > 0 else m.q0
            steps = 200
            for k in range(1, steps + 1):
                target = 1 / (1 / (xv * 1e6) + (1 / xv - 1 / (xv * 1e6)) * k / steps)
                for _ in range(50):
                    f = m.x(w) - target
                    df = mp.diff(m.x, w)
                    dw = f / df
                    w -= dw
                    if abs(dw) < mp.mpf(10) ** (-(self.dps - 5)):
                        break
            return w

    def to_json(self) -> dict:
        digits = self.dps - 5
        return {
            "precision_digits": digits,
            "ansatz": {
                "xi": "G (w - q0)(w - q1)^2 (w - c)/w^3",
                "eta": "w (n0 + n1 w + n2 w^2)/((w - q1)(w - q0)^3)",
                "x": "(gamma2 - gamma3) xi + xi^2 eta",
                "y": "-1/xi",
                "n2": "-(gamma2 - gamma3)/G",
                "q0": Q0,
            },
            "params": {k: mp.nstr(v, digits) for k, v in zip(("G", "q1", "c", "n0", "n1"), self.params)},
            "unknowns": {k: mp.nstr(v, digits) for k, v in sorted(self.unknowns.items())},
            "cut": [mp.nstr(t, digits) for t in self.cut],
            "model": model_to_dict(self.model),
            "report": self.report,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SpectralCurve":
        digits = int(doc.get("precision_digits", WORK_DPS - 5))
        dps = digits + 5
        with mp.workdps(dps):
            params = [mp.mpf(doc["params"][k]) for k in ("G", "q1", "c", "n0", "n1")]
            unknowns = {k: mp.mpf(v) for k, v in doc.get("unknowns", {}).items()}
            cut = tuple(mp.mpf(t) for t in doc.get("cut", []))
        model = model_from_dict(doc["model"])
        return cls(model=model, params=params, unknowns=unknowns, cut=cut, dps=dps,
                   report=doc.get("report", {}))


def model_to_dict(model: ChainModel) -> dict:
    return {
        "V": {str(k): str(v) for k, v in sorted(model.V.items())},
        "U": {str(k): str(v) for k, v in sorted(model.U.items())},
        "gamma2": str(model.gamma2),
        "gamma3": str(model.gamma3),
    }


def model_from_dict(d: dict) -> ChainModel:
    return ChainModel({int(k): Fraction(v) for k, v in d["V"].items()},
                      {int(k): Fraction(v) for k, v in d["U"].items()},
                      Fraction(d["gamma2"]), Fraction(d["gamma3"]))


def _vprime(model: ChainModel, xv):
    return sum(k * mp.mpf(c.numerator) / c.denominator * xv ** (k - 1) for k, c in model.V.items())


def _polymul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, s in enumerate(a):
        for j, t in enumerate(b):
            out[i + j] += s * t
    return out


def _polyadd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _x_rational(curve: SpectralCurve):
    with mp.workdps(curve.dps):
        m = curve.maps(mp.mp)
        lin = lambda r: [-r, 1]
        # x = (w-q1)^2 (w-c) [G^2 (w-q1)(w-c)(n0+n1 w+n2 w^2) + gap G (w-q0)^2 w^2] / (w^5 (w-q0))
        inner = _polyadd(
            [m.G**2 * t for t in _polymul(_polymul(lin(m.q1), lin(m.c)), [m.n0, m.n1, m.n2])],
            [m.gap * m.G * t for t in _polymul(_polymul(lin(m.q0), lin(m.q0)), [0, 0, 1])],
        )
        num = _polymul(_polymul(_polymul(lin(m.q1), lin(m.q1)), lin(m.c)), inner)
        # the w^7 coefficient cancels by the choice of n2
        num = num[:-1]
        den = _polymul([0, 0, 0, 0, 0, 1], lin(m.q0))
        return num, den


def _residue_at_q0(m: _Maps):
    xi_d = m.G * (m.q0 - m.q1) ** 2 * (m.q0 - m.c) / m.q0**3  # xi'(q0)
    eta_lead = m.q0 * (m.n0 + m.n1 * m.q0 + m.n2 * m.q0**2) / (m.q0 - m.q1)  # (w-q0)^3 eta at q0
    return xi_d**2 * eta_lead


# -- physical-sheet tests ----------------------------------------------------

def _critical_points(curve: SpectralCurve):
    num, den = _x_rational(curve)
    with mp.workdps(curve.dps):
        dnum = [i * c for i, c in enumerate(num)][1:]
        dden = [i * c for i, c in enumerate(den)][1:]
        top = _polyadd(_polymul(dnum, den), [-t for t in _polymul(num, dden)])
        # drop the w^4 factor coming from the pole of order five at w = 0
        top = top[4:]
        while abs(top[-1]) < mp.mpf(10) ** (-(curve.dps - 10)):
            top = top[:-1]
        roots = mp.polyroots(list(reversed(top)), maxsteps=400, extraprec=200)
        return roots


def physical_report(curve: SpectralCurve) -> dict:
    """Check that the sheet around q0 maps one-to-one onto C minus [a, b] with
    0 < a < b and that the eigenvalue density there is positive."""
    with mp.workdps(curve.dps):
        m = curve.maps(mp.mp)
        crit = _critical_points(curve)
        real = sorted(mp.re(c) for c in crit if abs(mp.im(c)) < mp.mpf(10) ** -12)
        left = [c for c in real if c < m.q0]
        right = [c for c in real if c > m.q0]
        rep = {"ok": False}
        if not left or not right:
            rep["reason"] = "no real critical points around the physical pole"
            return rep
        wl, wr = max(left), min(right)
        if wl < 0:
            rep["reason"] = "pole at w=0 lies on the physical real segment"
            return rep
        xl, xr = mp.re(m.x(wl)), mp.re(m.x(wr))
        a, b = sorted([xl, xr])
        wa, wb = (wl, wr) if xl == a else (wr, wl)
        rep.update(a=float(a), b=float(b))
        if a <= 0:
            rep["reason"] = "cut endpoint not on the positive axis"
            return rep
        path = _trace_cut(m, wa, a, b, 600)
        closure = abs(path[-1] - wb)
        rep["closure"] = float(closure)
        if closure > 1e-8:
            rep["reason"] = "preimage of the cut does not close"
            return rep
        loop = path + [mp.conj(p) for p in reversed(path)]
        wind_q0 = _winding(loop, m.q0)
        wind_0 = _winding(loop, 0)
        rep.update(winding_q0=wind_q0, winding_0=wind_0)
        if wind_q0 == 0 or wind_0 != 0:
            rep["reason"] = "physical pole not separated from the pole at w=0"
            return rep
        # density along the cut from the boundary value on the physical side;
        # the side is read at the arc midpoint, away from the square-root ends
        mid = path[len(path) // 2]
        side = mp.sign(mp.im(m.x(mid + (m.q0 - mid) * mp.mpf(10) ** -8)))
        dens = [-side * mp.im(m.y(p)) / (mp.pi * m.g3) for p in path[1:-1]]
        rep["density_min"] = float(min(dens))
        rep["density_max"] = float(max(dens))
        if min(dens) < -1e-12:
            rep["reason"] = "negative eigenvalue density"
            return rep
        rep["ok"] = True
        curve.cut = (a, b)
        return rep


def _trace_cut(m: _Maps, wa, a, b, steps):
    x2 = mp.diff(m.x, wa, 2)
    ts = [a + (b - a) * (1 - mp.cos(mp.pi * k / steps)) / 2 for k in range(steps + 1)]
    w = wa + 1j * mp.sqrt(2 * (ts[1] - a) / abs(x2))
    path = [mp.mpc(wa), w]
    for t in ts[2:]:
        for _ in range(60):
            dw = (m.x(w) - t) / mp.diff(m.x, w)
            w -= dw
            if abs(dw) < mp.mpf(10) ** -25:
                break
        path.append(w)
    return path


def _winding(loop, p) -> int:
    total = mp.mpf(0)
    for u, v in zip(loop, loop[1:] + loop[:1]):
        total += mp.arg((v - p) / (u - p))
    return int(mp.nint(total / (2 * mp.pi)))


# -- moments ------------------------------------------------------------------

def _curve_polynomial(model: ChainModel):
    E = loopsys.curve_in_xy(model)
    syms = sorted((s for s in E.free_symbols if s not in (loopsys.x, loopsys.y)), key=str)
    return E, syms


def solve_moments(curve: SpectralCurve, samples: int = 40):
    """Linear least squares for the unknown symbols on points near q0."""
    E, syms = _curve_polynomial(curve.model)
    base = sp.lambdify((loopsys.x, loopsys.y), E.subs({s: 0 for s in syms}), "mpmath")
    parts = [sp.lambdify((loopsys.x, loopsys.y), sp.diff(E, s), "mpmath") for s in syms]
    with mp.workdps(curve.dps):
        m = curve.maps(mp.mp)
        rows, rhs = [], []
        for k in range(samples):
            w = m.q0 + mp.mpf("0.3") * mp.expjpi(mp.mpf(2 * k + 1) / samples)
            xv, yv = m.x(w), m.y(w)
            rows.append([f(xv, yv) for f in parts])
            rhs.append(-base(xv, yv))
        A = mp.matrix(rows)
        bvec = mp.matrix(rhs)
        # stack real and imaginary parts; unknowns are real
        Ar = mp.matrix(2 * samples, len(syms))
        br = mp.matrix(2 * samples, 1)
        for i in range(samples):
            for j in range(len(syms)):
                Ar[i, j] = mp.re(A[i, j])
                Ar[samples + i, j] = mp.im(A[i, j])
            br[i] = mp.re(bvec[i])
            br[samples + i] = mp.im(bvec[i])
        sol, res = mp.qr_solve(Ar, br)
        sv = mp.svd_r(Ar, compute_uv=False)
        rank = sum(1 for s in sv if s > mp.mpf(10) ** -20 * max(sv))
    curve.E = E
    curve.unknowns = {str(s): sol[i] for i, s in enumerate(syms)}
    return rank, len(syms), float(res)


def gaussian_relations(curve: SpectralCurve) -> dict:
    """Deviations of identities the fitted symbols must satisfy for quadratic potentials."""
    v2, v1, u2, u1 = (mp.mpf(t.numerator) / t.denominator for t in _gaussian_couplings(curve.model))
    g3 = mp.mpf(curve.model.gamma3.numerator) / curve.model.gamma3.denominator
    u = curve.unknowns
    return {
        "P = -u2 v2 gamma3": float(abs(u["P_0_0"] + u2 * v2 * g3)),
        "Phh = -u2 R_01": float(abs(u["Phh_0_0"] + u2 * u["R_0_1_0"])),
        "Ph = -u2 R_10": float(abs(u["Ph_0_0"] + u2 * u["R_1_0_0"])),
        "Qhh = u2 C_1": float(abs(u["Qhh_0"] - u2 * u["C_1"])),
    }


def first_moments(curve: SpectralCurve) -> dict:
    """<M2>, <M3>, <M3^2> (normalized traces) from the fitted symbols."""
    v2 = _to_mpf(mp.mp, _gaussian_couplings(curve.model)[0])
    u = curve.unknowns
    return {"M2": u["R_0_1_0"] / v2, "M3": u["R_1_0_0"] / v2, "M3^2": u["R_2_0_0"] / v2}


def curve_residual(curve: SpectralCurve, samples: int = 100, radius=None) -> float:
    """max |E(x(w), y(w))| over points on a circle around q0 (off the fit contour)."""
    if curve.E is None:
        raise CurveSolveError("curve has no polynomial attached")
    subs = {sp.Symbol(k): v for k, v in curve.unknowns.items()}
    Ef = sp.lambdify((loopsys.x, loopsys.y), curve.E.subs({s: sp.Float(str(v), curve.dps) for s, v in subs.items()}), "mpmath")
    with mp.workdps(curve.dps):
        m = curve.maps(mp.mp)
        r = mp.mpf("0.45") if radius is None else mp.mpf(radius)
        worst = mp.mpf(0)
        for k in range(samples):
            w = m.q0 + r * mp.expjpi(mp.mpf(2 * k) / samples + mp.mpf(1) / (3 * samples))
            worst = max(worst, abs(Ef(m.x(w), m.y(w))))
        return float(worst)


def asymptotic_check(curve: SpectralCurve, eps=mp.mpf(10) ** -12) -> float:
    """omega1(x) x at a point close to the physical pole (|x| ~ 1/eps)."""
    with mp.workdps(curve.dps):
        m = curve.maps(mp.mp)
        w = m.q0 + eps
        xv = m.x(w)
        om = m.y(w) - _vprime(curve.model, xv)
        return float(mp.re(om * xv))


def constraint_count(curve: SpectralCurve, rank_moments: int, n_syms: int) -> dict:
    with mp.workdps(curve.dps):
        h = mp.mpf(10) ** -15
        J = mp.matrix(N_CONDITIONS, N_PARAMS)
        for j in range(N_PARAMS):
            vp = list(curve.params)
            vm = list(curve.params)
            vp[j] += h
            vm[j] -= h
            fp = conditions(vp, curve.model, mp.mp)
            fm = conditions(vm, curve.model, mp.mp)
            for i in range(N_CONDITIONS):
                J[i, j] = (fp[i] - fm[i]) / (2 * h)
        sv = mp.svd_r(J, compute_uv=False)
        rank = sum(1 for s in sv if s > mp.mpf(10) ** -12 * max(sv))
    return {
        "unknowns": N_PARAMS + n_syms,
        "independent_conditions": rank + rank_moments,
        "parametrization_unknowns": N_PARAMS,
        "parametrization_conditions": N_CONDITIONS,
        "parametrization_rank": rank,
        "curve_symbols": n_syms,
        "curve_symbol_rank": rank_moments,
    }


def solve_curve(model: ChainModel, seeds=None, dps: int = WORK_DPS) -> SpectralCurve:
    """Find the unique real one-cut solution; raise if none or several qualify."""
    check_signs(model)
    _gaussian_couplings(model)
    if model.gamma2 <= model.gamma3:
        raise CurveSolveError("need gamma2 > gamma3")
    candidates = find_real_solutions(model, seeds)
    if not candidates:
        raise CurveSolveError("root finder did not converge from any seed")
    accepted = []
    rejected = []
    for p in candidates:
        v, res = _polish(p, model, dps)
        if res > mp.mpf(10) ** -(dps - 12):
            rejected.append({"params": [float(t) for t in v], "reason": f"polish residual {float(res):.2e}"})
            continue
        curve = SpectralCurve(model=model, params=v, dps=dps)
        rep = physical_report(curve)
        if not rep["ok"]:
            rejected.append({"params": [float(t) for t in v], "reason": rep.get("reason")})
            continue
        fit = solve_moments(curve)
        mom = first_moments(curve)
        rep["moments"] = {k: float(t) for k, t in mom.items()}
        if not (mom["M2"] < 0 < mom["M3"]):
            rejected.append({"params": [float(t) for t in v], "reason": "mean of a signed matrix has the wrong sign"})
            continue
        accepted.append((curve, rep, float(res), fit))
    if not accepted:
        raise CurveSolveError(f"no candidate has a positive one-cut physical sheet: {rejected}")
    if len(accepted) > 1:
        raise CurveSolveError(
            "several candidates pass the physical-sheet test: "
            + str([[float(t) for t in c.params] for c, *_ in accepted])
        )
    curve, rep, res, (rank, n_syms, fit_res) = accepted[0]
    curve.report = {
        "physical": rep,
        "condition_residual": res,
        "moment_fit_residual": fit_res,
        "constraints": constraint_count(curve, rank, n_syms),
        "gaussian_relations": gaussian_relations(curve),
        "rejected_candidates": len(rejected),
    }
    return curve


def resolve_from(model: ChainModel, start, dps: int = WORK_DPS) -> SpectralCurve:
    """Newton solve from an explicit starting vector (no candidate search)."""
    with np.errstate(all="ignore"):
        s = least_squares(lambda p: conditions(p, model), np.asarray(start, dtype=float), method="lm",
                          max_nfev=3000, xtol=1e-15, ftol=1e-15)
    try:
        v, res = _polish(s.x, model, dps)
    except ZeroDivisionError:
        raise CurveSolveError(f"singular Jacobian near {list(s.x)}; start too far from a solution") from None
    return SpectralCurve(model=model, params=v, dps=dps, report={"condition_residual": float(res)})


def dumps(curve: SpectralCurve) -> str:
    return json.dumps(curve.to_json(), indent=1, sort_keys=True) + "\n"
