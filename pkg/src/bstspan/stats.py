"""Goodness-of-fit machinery for the Gaussian limit laws."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Mapping

from .exactdist import WeightedDistTable, pgf
from .moments import QuasiPowerModel

__all__ = [
    "GofReport",
    "normal_cdf",
    "ks_vs_normal",
    "tv_distance",
    "chi_square",
    "leading_order_normalization",
    "gof_report",
    "quasi_power_ratio",
    "MIN_VARG",
]

# e^s must stay clear of the v = 1/2 singularity of the limit prefactors
MIN_VARG = 0.6


def normal_cdf(x: float) -> float:
    """Standard normal distribution function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def ks_vs_normal(hist: Mapping[int, float], center: float, scale: float) -> float:
    """Kolmogorov distance between a discrete law and ``N(center, scale^2)``.

    ``hist`` maps support points to counts (or any nonnegative weights).  The
    supremum over the real line of |F_emp - Phi| is attained at an atom,
    either just before it or at it, so both one-sided limits are checked.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    total = float(sum(hist.values()))
    if not hist or total <= 0:
        raise ValueError("empty histogram")
    cum = 0.0
    dist = 0.0
    for m in sorted(hist):
        phi = normal_cdf((m - center) / scale)
        before = cum / total
        cum += hist[m]
        after = cum / total
        dist = max(dist, abs(before - phi), abs(after - phi))
    return min(dist, 1.0)


def _check_pmf(pmf: Mapping, name: str) -> None:
    s = math.fsum(float(v) for v in pmf.values())
    if abs(s - 1.0) > 1e-12 or any(float(v) < 0 for v in pmf.values()):
        raise ValueError(f"{name} is not a probability mass function (sum={s!r})")


def tv_distance(pmf_a: Mapping, pmf_b: Mapping) -> float:
    """Total variation ``(1/2) sum |a_m - b_m|`` over the union of supports."""
    _check_pmf(pmf_a, "pmf_a")
    _check_pmf(pmf_b, "pmf_b")
    keys = set(pmf_a) | set(pmf_b)
    return 0.5 * math.fsum(abs(float(pmf_a.get(k, 0)) - float(pmf_b.get(k, 0))) for k in keys)


def chi_square(hist: Mapping[int, int], pmf: Mapping, min_expected: float = 5.0) -> float:
    """Pearson statistic with adjacent bins pooled until each expects ``min_expected``."""
    _check_pmf(pmf, "pmf")
    trials = sum(hist.values())
    if trials <= 0:
        raise ValueError("empty histogram")
    keys = sorted(set(hist) | set(pmf))
    bins: list[list[float]] = []
    obs = exp = 0.0
    for k in keys:
        obs += hist.get(k, 0)
        exp += trials * float(pmf.get(k, 0))
        if exp >= min_expected:
            bins.append([obs, exp])
            obs = exp = 0.0
    if obs or exp:
        if bins:
            bins[-1][0] += obs
            bins[-1][1] += exp
        else:
            bins.append([obs, exp])
    stat = 0.0
    for o, e in bins:
        if e > 0:
            stat += (o - e) ** 2 / e
        elif o > 0:
            return math.inf
    return stat


def leading_order_normalization(n: int, p: int) -> tuple[float, float]:
    """Centering ``2p ln n`` and scale ``sqrt(2p ln n)``."""
    c = 2 * p * math.log(n)
    return c, math.sqrt(c)


@dataclass(frozen=True)
class GofReport:
    n: int
    p: int
    kind: str
    ks_distance: float
    tv_distance: float | None
    chi_square_stat: float | None
    center: float
    scale: float
    mode: str = "leading"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    CSV_HEADER = ("n", "p", "kind", "mode", "center", "scale", "ks_distance", "tv_distance",
                  "chi_square_stat")

    def csv_row(self) -> tuple:
        def f(x):
            return "" if x is None else repr(x)

        return (self.n, self.p, self.kind, self.mode, repr(self.center), repr(self.scale),
                repr(self.ks_distance), f(self.tv_distance), f(self.chi_square_stat))


def gof_report(
    hist: Mapping[int, float],
    n: int,
    p: int,
    kind: str,
    *,
    exact_pmf: Mapping | None = None,
    mode: str = "leading",
) -> GofReport:
    """KS against the normal law, plus TV / chi-square against ``exact_pmf`` if given.

    ``mode="leading"`` standardizes with ``2p ln n``; ``mode="exact"`` uses the
    mean and variance of ``hist`` itself (sharper at small ``n``).
    """
    if mode == "leading":
        center, scale = leading_order_normalization(n, p)
    elif mode == "exact":
        total = float(sum(hist.values()))
        center = sum(m * c for m, c in hist.items()) / total
        var = sum((m - center) ** 2 * c for m, c in hist.items()) / total
        if var <= 0:
            raise ValueError("degenerate histogram has no exact standardization")
        scale = math.sqrt(var)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    ks = ks_vs_normal(hist, center, scale)
    tv = chi = None
    if exact_pmf is not None:
        total = float(sum(hist.values()))
        emp = {m: c / total for m, c in hist.items()}
        tv = tv_distance(emp, exact_pmf)
        if all(float(c).is_integer() for c in hist.values()):
            chi = chi_square({m: int(c) for m, c in hist.items()}, exact_pmf)
    return GofReport(n, p, kind.upper(), ks, tv, chi, center, scale, mode)


def quasi_power_ratio(
    table: WeightedDistTable, model: QuasiPowerModel, n: int, p: int, s: float
) -> float:
    """``E[e^{sK}] / exp(u(s) ln n + v(s))`` from the exact table."""
    if table.kind != model.kind:
        raise ValueError(f"table kind {table.kind} does not match model kind {model.kind}")
    if p != model.p:
        raise ValueError(f"model is for p={model.p}, got p={p}")
    w = math.exp(s)
    if w < MIN_VARG:
        raise ValueError(f"e^s = {w:.4g} is below {MIN_VARG}")
    exact = pgf(table, n, p, w)
    return exact / math.exp(model.log_mgf(n, s))
