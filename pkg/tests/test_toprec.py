from fractions import Fraction
from itertools import permutations
from math import prod

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from hyperhurwitz import cli, toprec
from hyperhurwitz.toprec import Jet


def double_factorial(k):
    return prod(range(k, 0, -2)) if k > 0 else 1


# psi-class intersection numbers on moduli of curves, by (genus, sorted d's)
INTERSECTIONS = {
    (0, (0, 0, 0)): Fraction(1),
    (0, (0, 0, 0, 1)): Fraction(1),
    (0, (0, 0, 0, 0, 2)): Fraction(1),
    (0, (0, 0, 0, 1, 1)): Fraction(2),
    (1, (1,)): Fraction(1, 24),
    (1, (0, 2)): Fraction(1, 24),
    (1, (1, 1)): Fraction(1, 24),
    (1, (0, 0, 3)): Fraction(1, 24),
    (1, (0, 1, 2)): Fraction(1, 12),
    (1, (1, 1, 1)): Fraction(1, 12),
    (2, (4,)): Fraction(1, 1152),
}


@pytest.fixture(scope="module")
def airy_table():
    return toprec.recurse(toprec.airy_curve(), 2, 3)


def test_airy_matches_intersection_numbers(airy_table):
    seen = set()
    for (g, n), tab in airy_table.omega.items():
        for labels, c in tab.items():
            ks = [k for _, k in labels]
            assert all(k % 2 == 0 for k in ks)
            ds = tuple(sorted((k - 2) // 2 for k in ks))
            want = INTERSECTIONS.get((g, ds), Fraction(0))
            assert c == want * prod(double_factorial(2 * d + 1) for d in ds), (g, n, labels)
            seen.add((g, ds))
    assert set(INTERSECTIONS) <= seen


def test_airy_free_energy_vanishes(airy_table):
    assert toprec.free_energy(airy_table, 2) == 0


def test_correlator_range():
    assert toprec.correlator_range(2, 3) == 3
    assert toprec.correlator_range(1, 5) == 3


def test_omega03_direct_on_two_branch_points():
    c = cli.joukowski_curve()
    t = toprec.recurse(c, 0, 3)
    assert toprec.omega03_direct(c, t.points) == t.omega[(0, 3)]


def test_joukowski_free_energy_and_invariance():
    c = cli.joukowski_curve()
    F2 = toprec.free_energy(toprec.recurse(c, 2, 1), 2)
    assert F2 == Fraction(1, 240)
    assert toprec.free_energy(toprec.recurse(c, 2, 1), 2, shift=Fraction(7, 3)) == F2
    assert toprec.free_energy(toprec.recurse(c.affine(Fraction(3), Fraction(-2)), 2, 1), 2) == F2


def test_scaling_y_scales_free_energy():
    c = cli.joukowski_curve()
    c2 = toprec.RationalCurve(c.xn, c.xd, [2 * v for v in c.yn], c.yd)
    # F_g is homogeneous of degree 2 - 2g in y
    assert toprec.free_energy(toprec.recurse(c2, 2, 1), 2) == Fraction(1, 240) / 4


def test_float_curve_agrees_with_exact():
    c = cli.joukowski_curve()
    f = toprec.RationalCurve(*([mp.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else mp.mpf(v)
                                for v in p] for p in (c.xn, c.xd, c.yn, c.yd)))
    F2 = toprec.free_energy(toprec.recurse(f, 2, 1), 2)
    assert abs(F2 - mp.mpf(1) / 240) < 1e-12


def test_symmetric_and_residue_free(airy_table):
    ws = [Fraction(5, 2), Fraction(3), Fraction(7, 2), Fraction(4), Fraction(9, 2)]
    for (g, n) in airy_table.omega:
        base = airy_table.evaluate(g, n, ws[:n])
        for perm in permutations(range(n)):
            assert airy_table.evaluate(g, n, [ws[i] for i in perm]) == base
        assert abs(airy_table.residue(g, n, 0, 0, ws[1:n])) < 1e-12


def test_pole_of_ydx_at_branch_point_raises():
    # y = w + 1/w^2 makes y dx = (w^2 + 1/w) dw at the branch point w = 0 of x = w^2/2
    c = toprec.RationalCurve([0, 0, Fraction(1, 2)], [Fraction(1)], [Fraction(1), 0, 0, Fraction(1)],
                             [0, 0, Fraction(1)])
    t = toprec.recurse(c, 2, 1)
    with pytest.raises(ValueError, match="pole"):
        toprec.free_energy(t, 2)


def test_free_energy_needs_genus_two(airy_table):
    with pytest.raises(ValueError):
        toprec.free_energy(airy_table, 1)


jets = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=6), min_size=3, max_size=7).filter(
    lambda c: c[0] != 0)


@given(jets, st.integers(-3, 3))
@settings(deadline=None)
def test_jet_inverse(c, val):
    j = Jet(val, c)
    prod_ = j.mul(j.inv())
    assert prod_.val == 0
    assert prod_.c[0] == 1 and all(t == 0 for t in prod_.c[1:])


@given(jets, st.integers(0, 3))
@settings(deadline=None)
def test_jet_integrate_then_differentiate(c, val):
    j = Jet(val, c)
    d = j.integrate().deriv()
    assert all(d.coef(p) == j.coef(p) for p in range(j.val, d.hi + 1))


def test_integrate_rejects_log_term():
    with pytest.raises(ValueError):
        Jet(-1, [Fraction(1), Fraction(0)]).integrate()


def test_branch_points_simple_examples():
    jk = toprec.RationalCurve([1, 0, 1], [0, 1], [0, 1], [1])
    assert sorted(toprec.branch_points(jk)) == [-1, 1]
    sq = toprec.RationalCurve([0, 0, 1], [1], [0, 1], [1])
    assert toprec.branch_points(sq) == [0]


def test_correlators_transform_as_differentials():
    alpha, beta = Fraction(3), Fraction(-2)
    c = cli.joukowski_curve()
    t = toprec.recurse(c, 1, 3)
    u = toprec.recurse(c.affine(alpha, beta), 1, 3)
    ws = [Fraction(5, 2), Fraction(-7, 3), Fraction(11, 4)]
    for (g, n) in t.omega:
        us = [alpha * w + beta for w in ws[:n]]
        assert u.evaluate(g, n, us) * alpha**n == t.evaluate(g, n, ws[:n])
