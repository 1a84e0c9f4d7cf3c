from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hyperhurwitz.series import FormalSeries, TruncationError, coefficient, log1p

D = 3
names = st.sampled_from(["t1", "t2", "tt1", "g2", "g3"])
monomials = st.tuples(
    st.integers(1, D), st.integers(-3, 3),
    st.lists(st.tuples(names, st.integers(1, 2)), max_size=2),
)
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=5)
positive_series = st.dictionaries(monomials.map(lambda m: (m[0], m[1], tuple(m[2]))), coeffs, max_size=4).map(
    lambda d: FormalSeries(D, d)
)


@given(positive_series)
@settings(deadline=None, max_examples=50)
def test_exp_log_roundtrip(F):
    assert F.exp().log() == F
    assert log1p(F.exp() - 1) == F


@given(positive_series, positive_series)
@settings(deadline=None, max_examples=40)
def test_exp_is_a_homomorphism(F, G):
    assert (F + G).exp() == F.exp() * G.exp()


@given(positive_series)
@settings(deadline=None, max_examples=30)
def test_log1p_agrees_with_log(F):
    assert log1p(F) == (F + 1).log()


def test_log_of_one_plus_q():
    q = FormalSeries.monomial(4, q=1)
    L = (q + 1).log()
    assert [L.coefficient(k) for k in range(1, 5)] == [1, Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4)]


def test_nonunit_constant_rejected():
    with pytest.raises(ValueError):
        FormalSeries.monomial(2, q=0, coeff=2).log()
    with pytest.raises(ValueError):
        FormalSeries.one(2).exp()


def test_truncation_checks():
    with pytest.raises(TruncationError):
        FormalSeries.one(2) + FormalSeries.one(3)
    with pytest.raises(TruncationError):
        FormalSeries(1, {(1, 0, (("t2", 1),)): 1})
    with pytest.raises(TruncationError):
        FormalSeries.one(2).coefficient(3)


def test_json_roundtrip_and_mapping_lookup():
    F = FormalSeries(2, {(1, 2, (("t1", 1), ("tt1", 1), ("g2", 1), ("g3", 2))): Fraction(1, 3)})
    rows = F.to_json()
    assert rows == [{"monomial": {"q": 1, "N": 2, "t": {"1": 1}, "tt": {"1": 1}, "g2": 1, "g3": 2}, "coeff": "1/3"}]
    assert FormalSeries.from_json(2, rows) == F
    assert coefficient(F, rows[0]["monomial"]) == Fraction(1, 3)
