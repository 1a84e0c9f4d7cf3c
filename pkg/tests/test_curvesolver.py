from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from hyperhurwitz import curvesolver as cs
from hyperhurwitz.loopsys import ChainModel

# frozen from the solver at 40 digits, cross-checked by the polynomial residual below
PARAMS = [6.07698032931, -0.0761186822679, 0.413367443961, -0.311761431648, 0.491611409746]


def test_params_frozen(gaussian_curve):
    assert np.allclose([float(p) for p in gaussian_curve.params], PARAMS, rtol=1e-10)


def test_conditions_vanish(gaussian_curve):
    with mp.workdps(gaussian_curve.dps):
        res = cs.conditions(gaussian_curve.params, gaussian_curve.model, mp.mp)
        assert max(abs(r) for r in res) < mp.mpf(10) ** -25


def test_polynomial_curve_residual(gaussian_curve):
    assert cs.curve_residual(gaussian_curve, 100) < 1e-10


def test_resolvent_asymptotics(gaussian_curve):
    assert abs(cs.asymptotic_check(gaussian_curve) - 1.0) < 1e-8


def test_physical_sheet(gaussian_curve):
    rep = gaussian_curve.report["physical"]
    a, b = (float(t) for t in gaussian_curve.cut)
    assert 0 < a < b
    assert rep["ok"]
    assert gaussian_curve.report["constraints"]["unknowns"] == gaussian_curve.report["constraints"]["independent_conditions"]


def test_gaussian_moment_relations(gaussian_curve):
    assert max(gaussian_curve.report["gaussian_relations"].values()) < 1e-10


def test_resolvent_matches_expansion(gaussian_curve):
    # omega1(x) ~ gamma3/x + <M1>/x^2 at large x
    big = mp.mpf(10) ** 6
    w = gaussian_curve.omega1(big)
    assert abs(w * big - 1) < 1e-5


def test_json_roundtrip(gaussian_curve):
    doc = gaussian_curve.to_json()
    back = cs.SpectralCurve.from_json(doc)
    assert all(abs(a - b) < 1e-30 for a, b in zip(back.params, gaussian_curve.params))
    assert back.model == gaussian_curve.model


def test_perturbed_restart_converges_back(gaussian_curve):
    start = np.array([float(p) for p in gaussian_curve.params]) * 1.01
    other = cs.resolve_from(gaussian_curve.model, start)
    assert max(abs(a - b) for a, b in zip(other.params, gaussian_curve.params)) < 1e-20


def test_non_quadratic_rejected():
    m = ChainModel({3: Fraction(-1, 3), 2: Fraction(-1, 2)}, {2: Fraction(-1, 2)}, 2, 1)
    with pytest.raises(cs.AnsatzMismatch):
        cs.solve_curve(m)


def test_growing_weight_rejected():
    m = ChainModel({2: Fraction(1, 2)}, {2: Fraction(-1, 2)}, 2, 1)
    with pytest.raises(cs.CurveSolveError):
        cs.solve_curve(m)


def test_residual_detects_perturbed_coefficient(gaussian_curve):
    import dataclasses

    params = list(gaussian_curve.params)
    params[2] += mp.mpf("1e-3")
    bumped = dataclasses.replace(gaussian_curve, params=params)
    assert cs.curve_residual(bumped, 100) > 1e-6
