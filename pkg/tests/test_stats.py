import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bstspan.exactdist import pmf
from bstspan.moments import quasi_power_model
from bstspan.stats import (
    chi_square,
    gof_report,
    ks_vs_normal,
    normal_cdf,
    leading_order_normalization,
    quasi_power_ratio,
    tv_distance,
)


def test_normal_cdf():
    assert normal_cdf(0) == 0.5
    assert normal_cdf(1.0) == pytest.approx(0.8413447460685429, abs=1e-12)


@given(st.floats(-30, 30))
def test_normal_cdf_symmetry(x):
    assert normal_cdf(x) == pytest.approx(1 - normal_cdf(-x), abs=1e-15)


def test_ks_degenerate_and_fine_histogram():
    assert ks_vs_normal({7: 100}, 7.0, 1.0) == pytest.approx(0.5)
    rng = np.random.default_rng(0)
    draws = np.round(rng.normal(0, 1, 200000) * 1000).astype(int)
    vals, counts = np.unique(draws, return_counts=True)
    hist = dict(zip(vals.tolist(), counts.tolist()))
    assert ks_vs_normal(hist, 0.0, 1000.0) < 2 / math.sqrt(200000) + 1e-3


def test_tv_distance():
    a = {1: 0.25, 2: 0.75}
    assert tv_distance(a, a) == 0
    assert tv_distance(a, {5: 1.0}) == 1
    with pytest.raises(ValueError):
        tv_distance({1: 0.5}, a)


def test_chi_square_pools_small_bins():
    exact = {1: 0.5, 2: 0.49, 3: 0.01}
    stat = chi_square({1: 50, 2: 50}, exact)
    assert stat == pytest.approx(0.0, abs=0.01)


def test_leading_order_normalization():
    c, s = leading_order_normalization(1000, 2)
    assert c == pytest.approx(4 * math.log(1000)) and s == pytest.approx(math.sqrt(4 * math.log(1000)))


def test_gof_report_modes(small_tables):
    _, yt = small_tables
    exact = {m: float(pr) for m, pr in pmf(yt, 12, 3)}
    hist = {m: round(pr * 10**6) for m, pr in exact.items()}
    r = gof_report(hist, 12, 3, "Y", exact_pmf=exact, mode="exact")
    assert r.tv_distance < 1e-5
    r2 = gof_report(hist, 12, 3, "Y", mode="leading")
    assert r2.tv_distance is None and r2.center == pytest.approx(6 * math.log(12))
    assert len(r2.csv_row()) == len(r2.CSV_HEADER)


def test_quasi_power_ratio_at_zero(small_tables):
    xt, yt = small_tables
    for kind, table in (("X", xt), ("Y", yt)):
        model = quasi_power_model(kind, 2)
        assert quasi_power_ratio(table, model, 12, 2, 0.0) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        quasi_power_ratio(xt, quasi_power_model("X", 2), 12, 2, -1.0)
