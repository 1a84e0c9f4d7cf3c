import json
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from hyperhurwitz import loopsys as ls
from hyperhurwitz.loopsys import ChainModel, HardWallError

r, s, z = sp.symbols("r s z")


def gaussian():
    return ChainModel({2: Fraction(-1, 2), 1: 3}, {2: Fraction(-1, 2), 1: -3}, 2, 1)


def test_determinant_and_rank():
    assert sp.expand(ls.system_matrix(r, s, z).det() + z + r**2 * s) == 0
    assert ls.rank_at_locus() == 2


def test_null_covector_annihilates_matrix():
    M = ls.system_matrix(r, s, ls.degeneracy_locus(r, s))
    assert all(sp.expand(c) == 0 for c in ls.null_covector(r, s) * M)


@pytest.mark.parametrize("convention", ls.CONVENTIONS)
def test_contraction_reproduces_curve(convention):
    assert ls.contraction_identity(gaussian(), convention) == 0


def test_cubic_model_contraction():
    m = ChainModel({3: Fraction(-1, 3), 2: 1}, {2: Fraction(-1, 2)}, 3, 1)
    assert ls.contraction_identity(m) == 0


def test_recursion_sign_discrepancy_reported():
    rep = ls.rec_identities_check()
    assert rep["consistent"] is False
    rows = rep["terms"]
    # every form agrees on f_{k-1,0}; derived and all-plus recursion differ on R_{k-1,1} and C_k
    assert rows["f_{k-1,0}"]["agree"]
    assert rows["R_{k-1,1}"]["derived"] == "-1"
    assert rows["R_{k-1,1}"]["plus_recursion"] == "1"
    assert rows["s*C_k"]["derived"] == "-1"


def test_model_validation():
    with pytest.raises(HardWallError):
        ChainModel({2: -1}, {2: -1}, 1, 1)
    with pytest.raises(ValueError):
        ChainModel({2: -1}, {2: -1}, 1, 2)
    with pytest.raises(ValueError):
        ChainModel({}, {2: -1}, 2, 1)


def test_emit_json_is_deterministic():
    a = ls.emit(gaussian(), "json")
    b = ls.emit(gaussian(), "json")
    assert a == b
    doc = json.loads(a)
    assert doc["degV"] == 2 and doc["gamma2"] == "2"
    assert doc["terms"], "curve has no terms"
    assert all(u["bracket"] for u in doc["unknowns"])


def test_emit_rejects_non_polynomial():
    m = ChainModel({2: -1, -1: -1}, {2: -1}, 2, 1)
    with pytest.raises(NotImplementedError):
        ls.emit(m)


def test_latex_output():
    assert ls.emit(gaussian(), "latex").strip()


@given(st.fractions(min_value=-3, max_value=3, max_denominator=4),
       st.fractions(min_value=-3, max_value=3, max_denominator=4),
       st.integers(3, 5))
@settings(deadline=None, max_examples=10)
def test_contraction_for_random_gaussian_couplings(v1, u1, g2):
    m = ChainModel({2: Fraction(-1, 2), 1: v1}, {2: Fraction(-1, 2), 1: u1}, g2, 1)
    assert ls.contraction_identity(m) == 0
