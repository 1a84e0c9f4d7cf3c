import pytest
from hypothesis import given, settings, strategies as st

from hyperhurwitz import enumeration as en, kernels
from hyperhurwitz.partitions import partitions_of

needs_compiled = pytest.mark.skipif(kernels._compiled is None, reason="compiled kernel not built")


@needs_compiled
@given(st.integers(1, 4).flatmap(lambda d: st.lists(st.sampled_from(partitions_of(d)), min_size=3, max_size=4)),
       st.booleans())
@settings(deadline=None, max_examples=40)
def test_backends_agree(profiles, connected):
    pt = en.ProfileTuple(profiles)
    en._tally.cache_clear()
    a = en.count_tuples_bruteforce(pt, connected, backend="python")
    b = en.count_tuples_bruteforce(pt, connected, backend="cython")
    assert a == b


def test_backend_is_reported():
    assert kernels.BACKEND in ("python", "cython")
