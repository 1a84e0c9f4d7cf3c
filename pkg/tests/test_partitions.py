from math import factorial

import pytest
from hypothesis import given, strategies as st
from sympy.functions.combinatorial.numbers import partition as npartitions

from hyperhurwitz.partitions import (
    Partition, class_size, cycle_type, hooks_and_contents, partition_count, partitions_of, z_factor,
)


def test_counts_match_sympy():
    for d in range(0, 40):
        assert partition_count(d) == npartitions(d)


def test_enumeration_matches_count():
    for d in range(0, 16):
        ps = partitions_of(d)
        assert len(ps) == partition_count(d)
        assert len(set(ps)) == len(ps)
        assert all(p.d == d for p in ps)


def test_reverse_lexicographic_order():
    assert [p.parts for p in partitions_of(4)] == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition([1, 2])
    with pytest.raises(ValueError):
        Partition([2, 0])
    assert Partition.from_any([1, 3, 2]) == (3, 2, 1)


def test_hooks_and_contents_small():
    hooks, contents = hooks_and_contents([2, 1])
    assert hooks == [3, 1, 1]
    assert contents == [0, 1, -1]


@given(st.integers(min_value=1, max_value=12))
def test_class_sizes_sum_to_group_order(d):
    assert sum(class_size(mu) for mu in partitions_of(d)) == factorial(d)


@given(st.integers(min_value=1, max_value=10), st.data())
def test_conjugate_is_involution(d, data):
    lam = data.draw(st.sampled_from(partitions_of(d)))
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().d == d


@given(st.permutations(list(range(7))))
def test_cycle_type_centralizer(perm):
    mu = cycle_type(perm)
    assert mu.d == 7
    assert factorial(7) % z_factor(mu) == 0
