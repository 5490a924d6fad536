from fractions import Fraction
from math import comb

import pytest

from bstspan.exactdist import (
    TableTooLarge,
    WeightedDistTable,
    brute_force_pmfs,
    build_x_table,
    build_y_table,
    estimate_table_bytes,
    moments_from_table,
    pgf,
    pmf,
    root_in_span_prob,
    vslice_table,
)


def test_trivial_pmfs(small_tables):
    xt, yt = small_tables
    assert pmf(xt, 1, 1) == [(1, Fraction(1))]
    assert pmf(xt, 2, 1) == [(1, Fraction(1, 2)), (2, Fraction(1, 2))]
    assert pmf(xt, 2, 2) == [(2, Fraction(1))]
    assert pmf(yt, 2, 2) == [(2, Fraction(1))]


def test_frozen_small_pmfs(small_tables):
    xt, yt = small_tables
    assert pmf(xt, 3, 1) == [(1, Fraction(1, 3)), (2, Fraction(4, 9)), (3, Fraction(2, 9))]
    assert pmf(xt, 4, 2) == [(2, Fraction(1, 4)), (3, Fraction(17, 36)), (4, Fraction(5, 18))]
    assert pmf(yt, 3, 2) == [(2, Fraction(2, 3)), (3, Fraction(1, 3))]


def test_single_node_span_is_one(small_tables):
    _, yt = small_tables
    for n in range(1, 13):
        assert pmf(yt, n, 1) == [(1, Fraction(1))]


@pytest.mark.parametrize("n,p", [(3, 1), (4, 2), (5, 3), (6, 2), (6, 4)])
def test_dp_matches_brute_force(small_tables, n, p):
    xt, yt = small_tables
    px, py, _ = brute_force_pmfs(n, p)
    assert dict(pmf(xt, n, p)) == px
    assert dict(pmf(yt, n, p)) == py


def test_pmfs_sum_to_one_and_respect_support(small_tables):
    for table in small_tables:
        for n in range(1, 13):
            for p in range(1, min(n, 4) + 1):
                rows = pmf(table, n, p)
                assert sum(pr for _, pr in rows) == 1
                assert all(pr > 0 and p <= m <= n for m, pr in rows)


def test_pgf(small_tables):
    xt, yt = small_tables
    assert pgf(xt, 7, 3, 1) == 1
    assert pgf(xt, 2, 1, 2) == 3
    assert pgf(yt, 9, 1, Fraction(5, 7)) == Fraction(5, 7)
    assert pgf(xt, 6, 2, 1.3) == pytest.approx(float(pgf(xt, 6, 2, Fraction(13, 10))), rel=1e-14)


def test_moments_from_table(small_tables):
    _, yt = small_tables
    r = moments_from_table(yt, 8, 1)
    assert (r.mean_exact, r.variance_exact) == (1, 0)
    r = moments_from_table(yt, 4, 4)
    assert (r.mean_exact, r.variance_exact) == (4, 0)


def test_json_round_trip(small_tables):
    xt, _ = small_tables
    back = WeightedDistTable.from_json(xt.to_json())
    assert (back.kind, back.n_max, back.p_max, back.cells) == (xt.kind, xt.n_max, xt.p_max, xt.cells)
    assert pmf(back, 9, 3) == pmf(xt, 9, 3)


def test_argument_errors():
    with pytest.raises(ValueError):
        build_x_table(3, 4)
    with pytest.raises(TableTooLarge):
        build_x_table(400, 5)
    with pytest.raises(TableTooLarge):
        build_x_table(20, 2, memory_budget=estimate_table_bytes(20, 2) - 1)
    xt = build_x_table(5, 2)
    with pytest.raises(ValueError):
        build_y_table(6, 2, xt)


def test_vslice_matches_exact_pgf(small_tables):
    # vslice stores C(n,p)-weighted pgfs
    xt, yt = small_tables
    for kind, table in (("X", xt), ("Y", yt)):
        vs = vslice_table(kind, 12, 1.2)
        for n in range(1, 13):
            for p in range(1, min(n, 4) + 1):
                expected = comb(n, p) * float(pgf(table, n, p, Fraction(6, 5)))
                assert vs.values[n][p] == pytest.approx(expected, rel=1e-12)


def test_root_in_span_prob():
    assert root_in_span_prob(3, 2) == Fraction(7, 9)
    assert all(root_in_span_prob(n, n) == 1 for n in range(1, 10))
    for n in range(1, 7):
        for p in range(1, n + 1):
            _, _, joint = brute_force_pmfs(n, p)
            assert sum(pr for (x, y), pr in joint.items() if x == y) == root_in_span_prob(n, p)
    assert float(root_in_span_prob(10**9, 3)) == pytest.approx(1 - 2 / 4, abs=1e-8)
