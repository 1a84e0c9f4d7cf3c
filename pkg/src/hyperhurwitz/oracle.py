"""Finite-size quadrature for the four-matrix chain and its exact loop equations.

Sign convention (reported in every output): the weight is

    exp N tr[V(M1) + M1 M2^-1 + M2 M3^-1 + M3 M4 + U(M4)]
        * |det M2|^(N(g2 - 2 g3)) * det M3^(-N g3)

on M1 > 0, M2 < 0, M3 > 0, M4 < 0. Under X2 = M1, X3 = -M2, X4 = M3,
X5 = -M4^-1 every interaction becomes -N tr X_k X_{k+1}^-1 with positive X's.
The logarithmic exponents are the ones for which variations of M2 and M3
produce exactly the constants (g2 - g3) and 0 appearing in the loop equations.

Each eigenvalue is integrated in logarithmic variables phi = log|m|, where
every factor of the integrand decays at least exponentially. The integrand is
a chain, so every product-form observable reduces to three matrix-vector
contractions on 1-d node sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .loopsys import ChainModel

CONVENTION = (
    "exp N tr[V(M1) + M1/M2 + M2/M3 + M3 M4 + U(M4)] |M2|^(N(g2-2g3)) M3^(-N g3); "
    "M1>0, M2<0, M3>0, M4<0; X2=M1, X3=-M2, X4=M3, X5=-1/M4"
)
SIGNS = (1, -1, 1, -1)

# Gauss-Kronrod 7/15 (positive half, last entry is the centre)
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

_X15 = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_W15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_G15 = np.zeros(15)
for _j, _w in zip((1, 3, 5), _WG[:3]):
    _G15[_j] = _w
    _G15[14 - _j] = _w
_G15[7] = _WG[3]


class QuadratureError(RuntimeError):
    pass


class DivergentWeight(ValueError):
    pass


@dataclass
class QuadratureConfig:
    size: int = 1  # gamma3 * N
    domain: tuple = (-40.0, 40.0)
    initial_panels: int = 40
    tol: float = 1e-10  # per-panel error, relative to the partition function
    max_nodes: int = 4000
    max_rounds: int = 40
    z_point: float = 1.0  # spectral parameter of the divided difference of U'

    def __post_init__(self):
        if self.size not in (1, 2):
            raise ValueError("matrix size must be 1 or 2")


# -- observables -----------------------------------------------------------

@dataclass
class Term:
    coef: float
    factors: dict = field(default_factory=dict)  # site (0..3) -> f(m) vectorised


Observable = list  # of Term


def const(c=1.0) -> Observable:
    return [Term(c, {})]


def site(k, f, c=1.0) -> Observable:
    return [Term(c, {k: f})]


def times(a: Observable, b: Observable) -> Observable:
    out = []
    for s in a:
        for t in b:
            if set(s.factors) & set(t.factors):
                fs = dict(s.factors)
                for k, g in t.factors.items():
                    f = fs.get(k)
                    fs[k] = g if f is None else (lambda m, f=f, g=g: f(m) * g(m))
                out.append(Term(s.coef * t.coef, fs))
            else:
                out.append(Term(s.coef * t.coef, {**s.factors, **t.factors}))
    return out


def plus(*obs: Observable) -> Observable:
    return [t for o in obs for t in o]


def scaled(a: Observable, c) -> Observable:
    return [Term(c * t.coef, t.factors) for t in a]


# -- model pieces -------------------------------------------------------------

def _poly(coeffs: dict):
    items = [(k, float(c)) for k, c in coeffs.items()]
    return lambda m: sum(c * m**k for k, c in items)


def _dpoly(coeffs: dict):
    items = [(k, float(c)) for k, c in coeffs.items() if k != 0]
    return lambda m: sum(k * c * m ** (k - 1) for k, c in items)


def check_convergence(model: ChainModel) -> dict:
    """Reject potentials for which the weight does not decay; report boundary behaviour."""
    if not model.decays():
        raise DivergentWeight("top couplings of V and U must be negative")
    lowV, lowU = min(model.V), min(model.U)
    barrier_V = lowV < 0 and model.V[lowV] < 0
    barrier_U = lowU < 0 and model.U[lowU] * (-1) ** (-lowU) < 0
    if lowV < 0 and not barrier_V:
        raise DivergentWeight("negative power of V blows up at M1 -> 0+")
    if lowU < 0 and not barrier_U:
        raise DivergentWeight("negative power of U blows up at M4 -> 0-")
    return {"barrier_M1": barrier_V, "barrier_M4": barrier_U}


def gaussian_oracle_model() -> ChainModel:
    """Quadratic potentials with 1/x barriers so the weight vanishes at M1 = 0 and M4 = 0."""
    return ChainModel({2: Fraction(-1, 2), 1: 3, -1: -1}, {2: Fraction(-1, 2), 1: -3, -1: 1}, 2, 1)


class _Chain:
    """Log-site weights and log pair kernels of the eigenvalue chain."""

    def __init__(self, model: ChainModel, K: int):
        check_convergence(model)
        g2, g3 = float(model.gamma2), float(model.gamma3)
        N = K / g3
        self.N, self.K = N, K
        V, U = _poly(model.V), _poly(model.U)
        p2 = N * (g2 - 2 * g3) + K - 1
        p3 = -N * g3 + K - 1
        self.site_log = [
            lambda ph: N * V(np.exp(ph)) + ph,
            lambda ph: p2 * ph + ph,
            lambda ph: p3 * ph + ph,
            lambda ph: N * U(-np.exp(ph)) + ph,
        ]
        self.pair_log = [
            lambda a, b: -N * np.exp(a - b),   # N m1/m2
            lambda a, b: -N * np.exp(a - b),   # N m2/m3
            lambda a, b: -N * np.exp(a + b),   # N m3 m4
        ]

    @staticmethod
    def m(k, ph):
        return SIGNS[k] * np.exp(ph)


class GenericChain:
    """Four-site chain given directly by log weights, log kernels and value maps."""

    def __init__(self, site_log, pair_log, maps=None, N: float = 1.0, K: int = 1):
        self.site_log, self.pair_log = list(site_log), list(pair_log)
        self.maps = maps or [lambda ph: ph] * 4
        self.N, self.K = N, K

    def m(self, k, ph):
        return self.maps[k](ph)


def _safe_exp(x):
    with np.errstate(over="raise", under="ignore"):
        try:
            return np.exp(x)
        except FloatingPointError as e:
            raise QuadratureError("integrand overflow; check potential signs") from e


class _Nodes:
    """A 1-d rule made of Gauss-Kronrod panels."""

    def __init__(self, panels):
        self.panels = sorted(panels)
        mids = np.array([(a + b) / 2 for a, b in self.panels])
        half = np.array([(b - a) / 2 for a, b in self.panels])
        self.x = (mids[:, None] + half[:, None] * _X15[None, :]).ravel()
        self.wk = (half[:, None] * _W15[None, :]).ravel()
        self.wg = (half[:, None] * _G15[None, :]).ravel()
        self.panel_of = np.repeat(np.arange(len(self.panels)), 15)


class _Engine:
    """Chain contraction for a fixed set of node rules."""

    def __init__(self, chain: _Chain, xs, ws):
        self.chain = chain
        self.xs = xs
        self.ws = ws
        self.site_w = [w * _safe_exp(chain.site_log[k](x)) for k, (x, w) in enumerate(zip(xs, ws))]
        self.kern = [_safe_exp(chain.pair_log[k](xs[k][:, None], xs[k + 1][None, :])) for k in range(3)]
        self.ms = [chain.m(k, x) for k, x in enumerate(xs)]

    def contract(self, factors: dict) -> float:
        v = self.site_w[0] * (factors[0](self.ms[0]) if 0 in factors else 1.0)
        for k in range(1, 4):
            v = (v @ self.kern[k - 1]) * self.site_w[k]
            if k in factors:
                v = v * factors[k](self.ms[k])
        return float(v.sum())

    def marginals(self, probe=None):
        """Per-site node contributions (forward * backward) for the given site factors."""
        probe = probe or {}
        f = []
        v = self.site_w[0] * (probe[0](self.ms[0]) if 0 in probe else 1.0)
        f.append(v)
        for k in range(1, 4):
            v = (v @ self.kern[k - 1]) * self.site_w[k] * (probe[k](self.ms[k]) if k in probe else 1.0)
            f.append(v)
        b = [None] * 4
        u = np.ones_like(self.site_w[3])
        b[3] = u
        for k in range(2, -1, -1):
            w_next = self.site_w[k + 1] * (probe[k + 1](self.ms[k + 1]) if k + 1 in probe else 1.0)
            u = self.kern[k] @ (w_next * u)
            b[k] = u
        return [f[k] * b[k] for k in range(4)]


def _probe():
    return {k: (lambda m: 1.0 + m * m) for k in range(4)}


class ChainQuadrature:
    """Adaptive GK chain rule for one model and matrix size."""

    def __init__(self, model, cfg: QuadratureConfig | None = None):
        self.cfg = cfg or QuadratureConfig()
        self.model = model
        self.chain = model if isinstance(model, GenericChain) else _Chain(model, self.cfg.size)
        a, b = self.cfg.domain
        edges = np.linspace(a, b, self.cfg.initial_panels + 1)
        self.panels = [[(edges[i], edges[i + 1]) for i in range(len(edges) - 1)] for _ in range(4)]
        self.rounds = 0
        self._refine()

    def _build(self):
        rules = [_Nodes(p) for p in self.panels]
        eng = _Engine(self.chain, [r.x for r in rules], [r.wk for r in rules])
        return rules, eng

    def _panel_errors(self, rules, eng, probe=None):
        marg = eng.marginals(probe)
        Z = marg[0].sum()
        errs = []
        for k, r in enumerate(rules):
            m = marg[k]
            ratio = np.where(r.wk > 0, r.wg / r.wk, 0.0)
            kron = np.bincount(r.panel_of, m, len(r.panels))
            gauss = np.bincount(r.panel_of, m * ratio, len(r.panels))
            errs.append(np.abs(kron - gauss) / abs(Z))
        return errs

    def _refine(self):
        tol = self.cfg.tol
        for rnd in range(self.cfg.max_rounds):
            rules, eng = self._build()
            e1 = self._panel_errors(rules, eng)
            e2 = self._panel_errors(rules, eng, _probe())
            changed = False
            new = []
            for k in range(4):
                err = np.maximum(e1[k], e2[k])
                ps = []
                for (a, b), e in zip(rules[k].panels, err):
                    if e > tol:
                        mid = (a + b) / 2
                        ps += [(a, mid), (mid, b)]
                        changed = True
                    else:
                        ps.append((a, b))
                new.append(ps)
            # the end panels must carry negligible mass
            for k in range(4):
                marg = eng.marginals()[k]
                r = rules[k]
                tot = marg.sum()
                first = marg[r.panel_of == 0].sum()
                last = marg[r.panel_of == len(r.panels) - 1].sum()
                if first > tol * tot or last > tol * tot:
                    raise QuadratureError(f"mass at the edge of the domain for site {k + 1}; widen the domain")
            self.rounds = rnd + 1
            if not changed:
                self.rules, self.engine = rules, eng
                self.panel_error = max(float(np.sum(np.maximum(e1[k], e2[k]))) for k in range(4))
                self.Z = float(eng.marginals()[0].sum())
                return
            self.panels = new
            if sum(len(p) for p in self.panels) * 15 > self.cfg.max_nodes * 4:
                raise QuadratureError("node budget exhausted before the panel tolerance was met")
        raise QuadratureError("adaptive refinement did not converge")

    @property
    def node_counts(self):
        return [len(p) * 15 for p in self.panels]

    def _term_value(self, t: Term) -> float:
        return t.coef * self.engine.contract(t.factors)

    def _term_error(self, t: Term) -> float:
        rules = self.rules
        marg = self.engine.marginals(t.factors)
        err = 0.0
        for k, r in enumerate(rules):
            ratio = np.where(r.wk > 0, r.wg / r.wk, 0.0)
            kron = np.bincount(r.panel_of, marg[k], len(r.panels))
            gauss = np.bincount(r.panel_of, marg[k] * ratio, len(r.panels))
            err = max(err, float(np.abs(kron - gauss).sum()))
        return abs(t.coef) * err

    def expectation(self, obs: Observable):
        """(value, error estimate) of the normalized expectation, size 1."""
        if self.cfg.size != 1:
            return self.expectation_sized(obs)
        val = sum(self._term_value(t) for t in obs) / self.Z
        err = sum(self._term_error(t) for t in obs) / abs(self.Z)
        return val, err

    def expectation_sized(self, obs: Observable):
        """Size 2: normalized trace of one-site statistics via Eynard-Mehta."""
        K = self.cfg.size
        for t in obs:
            if len(t.factors) > 1:
                raise ValueError("at size 2 only single-site observables are supported")
        G = self._gram({})
        Ginv = np.linalg.inv(G)
        val = 0.0
        for t in obs:
            if not t.factors:
                val += t.coef
                continue
            Gf = self._gram(t.factors)
            val += t.coef * float(np.trace(Ginv @ Gf)) / K
        return val, float("nan")

    def _gram(self, factors: dict):
        K = self.cfg.size
        G = np.empty((K, K))
        for i in range(K):
            for j in range(K):
                fs = dict(factors)
                fs[0] = _mul(fs.get(0), lambda m, i=i: m**i)
                fs[3] = _mul(fs.get(3), lambda m, j=j: m**j)
                G[i, j] = self.engine.contract(fs)
        return G


def _mul(f, g):
    if f is None:
        return g
    return lambda m: f(m) * g(m)


class TrapezoidChain:
    """Uniform-grid rule on trimmed domains; an independent check of ChainQuadrature."""

    def __init__(self, model: ChainModel, size: int = 1, h: float = 0.02,
                 domain=(-40.0, 40.0), cutoff: float = 1e-24):
        self.chain = _Chain(model, size)
        coarse = [np.arange(domain[0], domain[1] + 1e-12, 0.1)] * 4
        eng = _Engine(self.chain, coarse, [np.full_like(c, 0.1) for c in coarse])
        marg = eng.marginals(_probe())
        xs = []
        for k in range(4):
            m = marg[k]
            keep = np.nonzero(m > cutoff * m.max())[0]
            lo = coarse[k][max(keep[0] - 2, 0)]
            hi = coarse[k][min(keep[-1] + 2, len(coarse[k]) - 1)]
            xs.append(np.arange(lo, hi + h / 2, h))
        self.xs = xs
        self.engine = _Engine(self.chain, xs, [np.full_like(x, h) for x in xs])
        self.Z = self.engine.contract({})

    def expectation(self, obs: Observable) -> float:
        return sum(t.coef * self.engine.contract(t.factors) for t in obs) / self.Z


# -- loop equations -----------------------------------------------------------

SUBSTITUTIONS = {
    "i": ("1", "D", "D*M3", "D*M2"),
    "ii": ("1", "D", "D*M3", "M3"),
    "iii": ("1", "D", "D*M2", "M2"),
    "iv": ("1", "M3", "M2", "M2*M3"),
}


def _insertion(name: str, model: ChainModel, zpt: float) -> Observable:
    Up = _dpoly(model.U)
    Uz = Up(zpt)
    D = site(3, lambda m: (Up(m) - Uz) / (m - zpt))
    M2 = site(1, lambda m: m)
    M3 = site(2, lambda m: m)
    return {"1": const(), "D": D, "D*M3": times(D, M3), "D*M2": times(D, M2),
            "M3": M3, "M2": M2, "M2*M3": times(M2, M3)}[name]


def loop_observable(eqn: str, substitution: str, x: float, model: ChainModel, N: float, zpt: float = 1.0):
    """Observable whose expectation is the left side of the loop equation (divided by N)."""
    if eqn not in SUBSTITUTIONS or substitution not in SUBSTITUTIONS[eqn]:
        raise ValueError(f"unknown loop equation/substitution {eqn}/{substitution}")
    ins = _insertion(substitution, model, zpt)
    R = site(0, lambda m: 1.0 / (x - m))
    g2, g3 = float(model.gamma2), float(model.gamma3)
    if eqn == "i":
        Vp = _dpoly(model.V)
        R2 = site(0, lambda m: 1.0 / (x - m) ** 2)
        body = plus(scaled(R2, 1.0 / N), times(site(0, lambda m: Vp(m) / (x - m)), const()),
                    times(R, site(1, lambda m: 1.0 / m)))
    elif eqn == "ii":
        body = plus(times(site(0, lambda m: -m / (x - m)), site(1, lambda m: 1.0 / m)),
                    times(R, times(site(1, lambda m: m), site(2, lambda m: 1.0 / m))),
                    scaled(R, g2 - g3))
    elif eqn == "iii":
        body = plus(times(R, times(site(1, lambda m: m), site(2, lambda m: 1.0 / m))),
                    scaled(times(R, times(site(2, lambda m: m), site(3, lambda m: m))), -1.0))
    else:
        Up = _dpoly(model.U)
        body = plus(times(R, site(2, lambda m: m)), times(R, site(3, Up)))
    return times(body, ins)


def loop_residual(eqn: str, substitution: str, x: float, cfg: QuadratureConfig, model: ChainModel,
                  quad: ChainQuadrature | None = None):
    if cfg.size != 1:
        raise NotImplementedError("loop-equation residuals need mixed-site traces; only size 1 is supported")
    if x >= 0:
        raise ValueError("x must lie left of the positive support of M1")
    quad = quad or ChainQuadrature(model, cfg)
    return quad.expectation(loop_observable(eqn, substitution, x, model, quad.chain.N, cfg.z_point))


def loop_suite(model: ChainModel, xs=(-3.0, -5.0, -10.0), cfg: QuadratureConfig | None = None) -> dict:
    cfg = cfg or QuadratureConfig()
    quad = ChainQuadrature(model, cfg)
    rows = []
    for eqn, subs in SUBSTITUTIONS.items():
        for sub in subs:
            for x in xs:
                v, e = loop_residual(eqn, sub, x, cfg, model, quad)
                rows.append({"equation": eqn, "insertion": sub, "x": x, "residual": v, "error": e})
    return {
        "convention": CONVENTION,
        "size": cfg.size,
        "nodes": quad.node_counts,
        "panel_tolerance": cfg.tol,
        "residuals": rows,
        "max_abs_residual": max(abs(r["residual"]) for r in rows),
    }


def resolvent(x: float) -> Observable:
    return site(0, lambda m: 1.0 / (x - m))


def expectation(obs: Observable, cfg: QuadratureConfig, model: ChainModel):
    return ChainQuadrature(model, cfg).expectation(obs)


# -- integrand identities -------------------------------------------------------

def chain_log_integrand(xs, N, g2, g3, ts, lam) -> float:
    """log of the scalar chain density over x_2..x_{n-1} (measure dx_k/x_k for k >= 3)."""
    x = list(xs)
    n = len(x) + 2
    val = (g2 - g3) * N * (np.log(x[0]) - np.log(x[1]))
    val += N * sum(t * x[0] ** (r + 1) / (r + 1) for r, t in enumerate(ts))
    val -= N * sum(x[k] / x[k + 1] for k in range(n - 3))
    val -= N * x[-1] / lam
    val -= sum(np.log(v) for v in x[1:])
    return float(val)


def braid_move(xs, i: int):
    """X_i -> X_{i-1} X_i^-1 X_{i+1}; indices follow the chain labels 2..n-1."""
    x = list(xs)
    j = i - 2
    x[j] = x[j - 1] * x[j + 1] / x[j]
    return x


def braid_check(n: int, i: int, points: int = 100, seed: int = 0, N=1.0, g2=2.0, g3=1.0,
                interaction_only: bool = False) -> float:
    """max relative deviation of the density under the braid move (log-space)."""
    if not (3 <= i <= n - 2):
        raise ValueError("braid move needs neighbours on both sides")
    rng = np.random.default_rng(seed)
    ts = [-0.3, 0.1, -0.05]
    lam = 1.7
    worst = 0.0
    for _ in range(points):
        x = list(np.exp(rng.uniform(-1.5, 1.5, size=n - 2)))
        y = braid_move(x, i)
        j = i - 2
        if interaction_only:
            a = -N * sum(x[k] / x[k + 1] for k in range(n - 3))
            b = -N * sum(y[k] / y[k + 1] for k in range(n - 3))
        else:
            jac = x[j - 1] * x[j + 1] / x[j] ** 2
            a = chain_log_integrand(x, N, g2, g3, ts, lam)
            b = chain_log_integrand(y, N, g2, g3, ts, lam) + np.log(jac)
        worst = max(worst, abs(np.expm1(b - a)))
    return worst


def _log_unscaled(x, N, g2, g3, ts, lam):
    n = len(x) + 2
    v = N * sum(t * (x[0] * lam) ** (r + 1) / (r + 1) for r, t in enumerate(ts))
    v -= N * sum(x[k] / x[k + 1] for k in range(n - 3))
    v -= N * x[-1]
    v += (g2 - g3) * N * np.log(x[0]) - g2 * N * np.log(x[1]) - g3 * N * sum(np.log(t) for t in x[2:])
    return v


def _log_scaled(y, N, g2, g3, ts, lam):
    n = len(y) + 2
    v = N * sum(t * y[0] ** (r + 1) / (r + 1) for r, t in enumerate(ts))
    v -= N * sum(y[k] / y[k + 1] for k in range(n - 3))
    v -= N * y[-1] / lam
    v += (g2 - g3) * N * np.log(y[0]) - g2 * N * np.log(y[1]) - g3 * N * sum(np.log(t) for t in y[2:])
    return v


def scaling_check(n: int = 5, points: int = 100, seed: int = 1, N=1.0, g2=2.0, g3=1.0) -> float:
    """x -> y/lam maps the unscaled chain to the scaled one up to the constant lam^(N g3 (n-3))."""
    rng = np.random.default_rng(seed)
    ts = [-0.3, 0.1, -0.05]
    worst = 0.0
    for _ in range(points):
        lam = float(np.exp(rng.uniform(-1, 1)))
        y = list(np.exp(rng.uniform(-1.5, 1.5, size=n - 2)))
        x = [v / lam for v in y]
        lhs = _log_unscaled(x, N, g2, g3, ts, lam) - (n - 2) * np.log(lam)
        rhs = _log_scaled(y, N, g2, g3, ts, lam) + (N * g3 * (n - 3) - (n - 2)) * np.log(lam)
        worst = max(worst, abs(np.expm1(lhs - rhs)))
    return worst
