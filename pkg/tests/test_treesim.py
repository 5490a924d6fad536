
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bstspan.exactdist import brute_force_pmfs
from bstspan.treesim import (
    SimSummary,
    build_bst,
    instance_stats,
    lca_depth,
    node_distance,
    random_subsets,
    run_batch,
    span_size,
    span_with_root_size,
)


def test_build_small_trees():
    t = build_bst([2, 1, 3])
    assert t.root == 2 and t.left_child[2] == 1 and t.right_child[2] == 3
    assert t.depth[1:] == (1, 0, 1)
    t = build_bst([1, 2, 3])
    assert t.right_child[1] == 2 and t.right_child[2] == 3 and t.depth[1:] == (0, 1, 2)
    t = build_bst([3, 1, 2])
    assert t.root == 3 and t.left_child[3] == 1 and t.right_child[1] == 2


@pytest.mark.parametrize("perm", [[1, 1, 2], [0, 1, 2], [1, 2, 4]])
def test_build_rejects_non_permutations(perm):
    with pytest.raises(ValueError):
        build_bst(perm)


def test_span_examples():
    t = build_bst([2, 1, 3])
    assert span_with_root_size(t, {1, 3}) == 3
    assert node_distance(t, 1, 3) == 2
    t = build_bst([1, 2, 3])
    assert span_with_root_size(t, {3}) == 3
    assert lca_depth(t, {2, 3}) == 1 and span_size(t, {2, 3}) == 2
    assert node_distance(t, 1, 3) == 2 and node_distance(t, 2, 2) == 0


def _naive_parent_search(perm, key):
    # walk down from the root by comparisons
    path, node = [], perm[0]
    t = build_bst(perm)
    while node != key:
        path.append(node)
        node = t.left_child[node] if key < node else t.right_child[node]
    return path + [key]


@settings(max_examples=200, deadline=None)
@given(st.permutations(range(1, 11)), st.data())
def test_structural_identities(perm, data):
    t = build_bst(perm)
    S = data.draw(st.sets(st.integers(1, 10), min_size=1))
    x, y, d = instance_stats(t, S)
    assert x == y + d
    assert len(set().union(*(_naive_parent_search(perm, s) for s in S))) == x
    assert span_with_root_size(t, [t.root]) == 1
    assert span_size(t, range(1, 11)) == 10
    if len(S) >= 2:
        a, b = sorted(S)[:2]
        assert span_size(t, {a, b}) == node_distance(t, a, b) + 1


def test_random_subsets_are_uniform_and_sorted():
    rng = np.random.default_rng(1)
    s = random_subsets(rng, 5, 2, 50000)
    assert s.shape == (50000, 2) and np.all(s[:, 0] < s[:, 1])
    assert s.min() >= 1 and s.max() <= 5
    _, counts = np.unique(s[:, 0] * 10 + s[:, 1], return_counts=True)
    assert len(counts) == 10
    assert counts.min() / counts.max() > 0.9


def test_run_batch_trivial():
    s = run_batch(2, 2, 777, seed=3)
    assert s.hist_y == {2: 777} and s.hist_x == {2: 777}


@pytest.mark.parametrize("method", ["lazy", "tree"])
def test_run_batch_distribution_small(method):
    n, p, trials = 5, 2, 40000
    s = run_batch(n, p, trials, seed=11, method=method)
    px, py, _ = brute_force_pmfs(n, p)
    for hist, exact in ((s.hist_x, px), (s.hist_y, py)):
        tv = 0.5 * sum(abs(hist.get(m, 0) / trials - float(exact.get(m, 0))) for m in set(hist) | set(exact))
        assert tv < 0.02


def test_run_batch_determinism_across_threads():
    a = run_batch(40, 3, 5000, seed=9, threads=1, chunk_size=700)
    b = run_batch(40, 3, 5000, seed=9, threads=4, chunk_size=700)
    assert a.to_json() == b.to_json()
    c = run_batch(40, 3, 5000, seed=10, chunk_size=700)
    assert c.to_json() != a.to_json()


def test_summary_round_trip_and_moments():
    s = run_batch(20, 2, 3000, seed=5)
    assert SimSummary.from_dict(s.to_dict()) == s
    xs = np.repeat(list(s.hist_x), list(s.hist_x.values()))
    assert s.sample_mean_x == pytest.approx(xs.mean())
    assert s.sample_var_x == pytest.approx(xs.var(ddof=1))
    assert sum(s.hist_diff.values()) == s.trials


def test_run_batch_rejects_bad_arguments():
    with pytest.raises(ValueError):
        run_batch(3, 4, 10)
    with pytest.raises(ValueError):
        run_batch(3, 2, 10, method="heap")
