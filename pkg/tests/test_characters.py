from collections import Counter
from fractions import Fraction
from itertools import permutations
from math import factorial, prod

import pytest
from hypothesis import given, settings, strategies as st

from hyperhurwitz.characters import character, character_table, dimension
from hyperhurwitz.partitions import class_size, hooks_and_contents, partitions_of


def frobenius_character(lam, mu):
    """Coefficient of x^(lam + delta) in Vandermonde * power sums; independent of the border-strip rule."""
    k = len(lam)
    power = Counter({(0,) * k: 1})
    for m in mu:
        nxt = Counter()
        for e, c in power.items():
            for i in range(k):
                f = list(e)
                f[i] += m
                nxt[tuple(f)] += c
        power = nxt
    delta = [k - 1 - i for i in range(k)]
    target = [lam[i] + delta[i] for i in range(k)]
    total = 0
    for perm in permutations(range(k)):
        inversions = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        want = tuple(target[i] - delta[perm[i]] for i in range(k))
        total += (-1) ** inversions * power.get(want, 0)
    return total


def test_s4_table_frozen():
    ps, table = character_table(4)
    assert [p.parts for p in ps] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert table == [
        [1, 1, 1, 1, 1],
        [-1, 0, -1, 1, 3],
        [0, -1, 2, 0, 2],
        [1, 0, -1, -1, 3],
        [-1, 1, 1, -1, 1],
    ]


@pytest.mark.parametrize("d", range(1, 7))
def test_against_frobenius_formula(d):
    for lam in partitions_of(d):
        for mu in partitions_of(d):
            assert character(lam, mu) == frobenius_character(lam.parts, mu.parts)


@given(st.integers(min_value=1, max_value=9))
@settings(deadline=None, max_examples=9)
def test_row_orthogonality(d):
    ps, table = character_table(d)
    for i in range(len(ps)):
        for j in range(len(ps)):
            s = sum(Fraction(class_size(mu)) * table[i][c] * table[j][c] for c, mu in enumerate(ps))
            assert s == (factorial(d) if i == j else 0)


@given(st.integers(min_value=1, max_value=10))
@settings(deadline=None, max_examples=10)
def test_dimension_is_hook_formula_and_squares_sum(d):
    total = 0
    for lam in partitions_of(d):
        hooks, _ = hooks_and_contents(lam)
        dim = dimension(lam)
        assert dim == factorial(d) // prod(hooks)
        assert dim == character(lam, [1] * d)
        total += dim * dim
    assert total == factorial(d)


@given(st.integers(min_value=1, max_value=9), st.data())
@settings(deadline=None)
def test_sign_twist_by_conjugate(d, data):
    lam = data.draw(st.sampled_from(partitions_of(d)))
    mu = data.draw(st.sampled_from(partitions_of(d)))
    sign = (-1) ** (d - len(mu))
    assert character(lam.conjugate(), mu) == sign * character(lam, mu)
