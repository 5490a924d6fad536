import itertools

import pytest
from hypothesis import given, settings, strategies as st

from bstspan.mqs import multiple_quickselect, passes_equal_tree, run_mqs_batch


def test_examples():
    r = multiple_quickselect([5], {1})
    assert r.found == {1: 5} and r.passes == 1
    assert multiple_quickselect([2, 1, 3], {1, 3}).passes == 3
    assert multiple_quickselect([2, 1, 3], {2}).passes == 1


def test_finds_order_statistics_of_arbitrary_keys():
    data = [3.5, -1.0, 9.25, 0.0, 7.0]
    r = multiple_quickselect(data, {1, 3, 5})
    assert r.found == {1: -1.0, 3: 3.5, 5: 9.25}


def test_rejects_bad_ranks():
    with pytest.raises(ValueError):
        multiple_quickselect([1, 2], {3})
    assert multiple_quickselect([1, 2], set()).passes == 0


def test_exhaustive_four():
    for perm in itertools.permutations(range(1, 5)):
        for k in range(1, 5):
            for ranks in itertools.combinations(range(1, 5), k):
                assert passes_equal_tree(perm, ranks)


@settings(max_examples=300, deadline=None)
@given(st.permutations(range(1, 41)), st.data())
def test_random_instances(perm, data):
    ranks = data.draw(st.sets(st.integers(1, 40), min_size=1, max_size=6))
    assert passes_equal_tree(perm, ranks)


def test_batch_is_deterministic_and_counts_trials():
    a = run_mqs_batch(25, 2000, seed=4, p=3)
    b = run_mqs_batch(25, 2000, seed=4, p=3, threads=3, chunk_size=300)
    c = run_mqs_batch(25, 2000, seed=4, p=3, chunk_size=300)
    assert sum(a.values()) == 2000
    assert b == c
    assert min(a) >= 3 and max(a) <= 25
    fixed = run_mqs_batch(10, 500, seed=1, ranks=[1])
    assert sum(fixed.values()) == 500
