from fractions import Fraction

import numpy as np
import pytest

from hyperhurwitz import oracle as o
from hyperhurwitz.loopsys import ChainModel


@pytest.fixture(scope="module")
def quad():
    return o.ChainQuadrature(o.gaussian_oracle_model())


def test_normalization(quad):
    v, err = quad.expectation(o.const())
    assert abs(v - 1) < 1e-12


def test_resolvent_against_fixed_grid(quad):
    v, _ = quad.expectation(o.resolvent(-5.0))
    ref = o.TrapezoidChain(o.gaussian_oracle_model()).expectation(o.resolvent(-5.0))
    assert abs(v - ref) < 1e-8
    assert abs(v - (-0.132525959688)) < 1e-10  # frozen after the two rules agreed


def test_support_signs(quad):
    for k, sign in enumerate(o.SIGNS):
        v, _ = quad.expectation(o.site(k, lambda m: m))
        assert np.sign(v) == sign


@pytest.mark.parametrize("eqn", list(o.SUBSTITUTIONS))
def test_loop_equations_vanish(quad, eqn):
    cfg = o.QuadratureConfig()
    model = o.gaussian_oracle_model()
    for sub in o.SUBSTITUTIONS[eqn]:
        for x in (-3.0, -5.0, -10.0):
            v, _ = o.loop_residual(eqn, sub, x, cfg, model, quad)
            assert abs(v) <= 1e-6


def test_loop_equation_detects_a_wrong_coefficient(quad):
    # dropping the 1/N^2 connected term of the first equation leaves a visible residual
    model = o.gaussian_oracle_model()
    obs = o.loop_observable("i", "1", -5.0, model, quad.chain.N)
    missing = o.site(0, lambda m: 1.0 / (-5.0 - m) ** 2, 1.0 / quad.chain.N)
    v, _ = quad.expectation(obs)
    w, _ = quad.expectation(missing)
    assert abs(v) < 1e-8 and abs(w) > 1e-3


def test_planted_symmetry_kills_odd_moments():
    ch = o.GenericChain([lambda p: -p**2 / 2 - p**4 / 4] * 4, [lambda a, b: -(a - b) ** 2 / 2] * 3)
    q = o.ChainQuadrature(ch, o.QuadratureConfig(domain=(-12, 12)))
    assert abs(q.expectation(o.site(0, lambda m: m))[0]) < 1e-12
    assert abs(q.expectation(o.times(o.site(0, lambda m: m**3), o.site(3, lambda m: m**2)))[0]) < 1e-12
    assert q.expectation(o.site(1, lambda m: m**2))[0] > 0.1


def test_size_two_normalized():
    q = o.ChainQuadrature(o.gaussian_oracle_model(), o.QuadratureConfig(size=2))
    assert abs(q.expectation(o.const())[0] - 1) < 1e-10
    v = q.expectation(o.resolvent(-5.0))[0]
    assert -0.2 < v < -0.1


def test_divergent_weight_rejected():
    m = ChainModel({2: Fraction(1, 2)}, {2: Fraction(-1, 2)}, 2, 1)
    with pytest.raises(o.DivergentWeight):
        o.ChainQuadrature(m)
    m = ChainModel({2: Fraction(-1, 2), -1: 1}, {2: Fraction(-1, 2)}, 2, 1)
    with pytest.raises(o.DivergentWeight):
        o.ChainQuadrature(m)


def test_loop_residual_rejects_inside_support(quad):
    with pytest.raises(ValueError):
        o.loop_residual("i", "1", 2.0, o.QuadratureConfig(), o.gaussian_oracle_model(), quad)


@pytest.mark.parametrize("n,i", [(6, 4), (7, 4), (7, 5), (8, 5)])
def test_braid_invariance(n, i):
    assert o.braid_check(n, i) <= 1e-12


def test_braid_first_interior_index_moves_boundary_term():
    # the move next to the potential changes the V-dependent end; the chain interaction alone is invariant
    assert o.braid_check(6, 3, interaction_only=True) <= 1e-12
    assert o.braid_check(6, 3) > 1e-3


def test_scaling_identity():
    assert o.scaling_check() <= 1e-12
