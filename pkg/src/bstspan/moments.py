"""Exact and asymptotic moments of the spanning-tree sizes.

Exact values of E(Y) and V(Y) use closed forms in harmonic numbers and
alternating binomial sums, evaluated in rational arithmetic.  The
alternating sums cancel catastrophically in floating point, so floats only
appear in the asymptotic predictions and in report conversion.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .combinatorics import binomial, falling_factorial, harmonic, harmonic2

__all__ = [
    "EULER_GAMMA",
    "MomentReport",
    "AsymptoticConstants",
    "QuasiPowerModel",
    "expectation_y_exact",
    "expectation_y_exact_alt",
    "variance_y_exact",
    "asymptotic_constants",
    "mean_var_asym",
    "lemma_variance_constant",
    "quasi_power_model",
    "moment_report",
    "reports_to_csv",
]

EULER_GAMMA = 0.5772156649015329
PI2_OVER_6 = math.pi**2 / 6


@dataclass(frozen=True)
class MomentReport:
    n: int
    p: int
    kind: str
    mean_exact: Fraction
    variance_exact: Fraction
    second_factorial: Fraction | None = None
    mean_asym: float = float("nan")
    variance_asym: float = float("nan")

    @property
    def abs_gap_mean(self) -> float:
        return abs(float(self.mean_exact) - self.mean_asym)

    @property
    def abs_gap_var(self) -> float:
        return abs(float(self.variance_exact) - self.variance_asym)

    CSV_HEADER = (
        "n", "p", "kind", "mean_num", "mean_den", "mean_float",
        "variance_num", "variance_den", "variance_float", "mean_asym", "variance_asym",
    )

    def csv_row(self) -> tuple:
        return (
            self.n, self.p, self.kind,
            self.mean_exact.numerator, self.mean_exact.denominator, repr(float(self.mean_exact)),
            self.variance_exact.numerator, self.variance_exact.denominator,
            repr(float(self.variance_exact)), repr(self.mean_asym), repr(self.variance_asym),
        )

    def to_dict(self) -> dict:
        def nan_safe(x):
            return None if math.isnan(x) else x

        return {
            "n": self.n,
            "p": self.p,
            "kind": self.kind,
            "mean": {"num": str(self.mean_exact.numerator), "den": str(self.mean_exact.denominator),
                     "float": float(self.mean_exact)},
            "variance": {"num": str(self.variance_exact.numerator),
                         "den": str(self.variance_exact.denominator),
                         "float": float(self.variance_exact)},
            "mean_asym": nan_safe(self.mean_asym),
            "variance_asym": nan_safe(self.variance_asym),
        }


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MomentReport.CSV_HEADER)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def _check(n: int, p: int) -> None:
    if p < 1 or n < p:
        raise ValueError(f"need 1 <= p <= n, got n={n}, p={p}")


def _alt_sum(n: int, upto: int, power: int) -> Fraction:
    """sum_{k=1}^{upto} (-1)^k / k^power * C(n, k)."""
    total = Fraction(0)
    for k in range(1, upto + 1):
        term = Fraction(binomial(n, k), k**power)
        total += -term if k % 2 else term
    return total


def expectation_y_exact(n: int, p: int) -> Fraction:
    """Exact E(Y_{n,p}) for ``1 <= p <= n``."""
    _check(n, p)
    hn, hp = harmonic(n), harmonic(p)
    d = (n + 2 - p) * (n + 1 - p)
    lead = Fraction(2 * p * (n + 1) ** 2, d) * (hn - hp)
    lead += Fraction(2 * (2 * p - 1) * (n + 1), d) + 3 + 2 * p - Fraction(2 * p * n, n + 1 - p)
    tail = Fraction(2 * p * (n + 1) * (-1) ** p, binomial(n, p))
    return lead + tail * (hn + _alt_sum(n, p - 1, 1))


def expectation_y_exact_alt(n: int, p: int) -> Fraction:
    """Same value, with H_n folded into sum_{k=p}^{n} (-1)^(k-1)/k C(n,k)."""
    _check(n, p)
    hn, hp = harmonic(n), harmonic(p)
    d = (n + 2 - p) * (n + 1 - p)
    lead = Fraction(2 * p * (n + 1) ** 2, d) * (hn - hp)
    lead += Fraction(2 * (2 * p - 1) * (n + 1), d) + 3 + 2 * p - Fraction(2 * p * n, n + 1 - p)
    tail = Fraction(2 * p * (n + 1) * (-1) ** p, binomial(n, p))
    s = Fraction(0)
    for k in range(p, n + 1):
        term = Fraction(binomial(n, k), k)
        s += term if k % 2 else -term
    return lead + tail * s


def _psi3(n: int, p: int) -> int:
    return (
        -2 * p**4 - 6 * n**2 * p**3 + 16 * p**3 - 2 * n**3 * p**3 - 45 * p**2 * n
        - 58 * p**2 - 4 * n**2 * p**2 + 2 * p**2 * n**4 + 7 * n**3 * p**2 + 56 * p
        + 78 * n * p + 6 * n**3 * p + 41 * p * n**2 - n**4 * p - 8 - 20 * n
        - 16 * n**2 - 4 * n**3
    )


def _psi4(n: int, p: int) -> int:
    return (
        -144 - 6 * p**5 - 3 * n**4 - 152 * p**3 * n + 2 * p**4 * n**2 + 25 * p**4 * n
        - 234 * n + 78 * p + 10 * n * p - 5 * n**4 * p - 39 * n**2 * p**3
        - 4 * n**3 * p**3 + 250 * p**2 * n + 119 * n**2 * p**2 + 2 * p**2 * n**4
        + 25 * n**3 * p**2 - 22 * n**3 * p - 35 * p * n**2 + 155 * p**2
        - 173 * p**3 + 58 * p**4 - 153 * n**2 - 42 * n**3
    )


def variance_y_exact(n: int, p: int) -> Fraction:
    """Exact V(Y_{n,p}); zero for ``p = 1``.

    The coefficient of the squared-logarithm term is
    ``4p(n+2)(n+1)^2(np+2+p) / (n+4-p)^{4 falling}``; this is the exponent
    that reproduces the exact distribution (with ``(n+1)^3`` the variance
    would grow like ``n log^2 n``).
    """
    _check(n, p)
    if p == 1:
        return Fraction(0)
    ff = falling_factorial(n + 4 - p, 4)
    if ff == 0:
        raise ValueError(f"degenerate falling factorial at n={n}, p={p}")
    hn, hp = harmonic(n), harmonic(p)
    hn2, hp2 = harmonic2(n), harmonic2(p)
    cnp = binomial(n, p)
    sgn = (-1) ** p
    a1 = _alt_sum(n, p - 1, 1)
    a2 = _alt_sum(n, p - 1, 2)
    e = expectation_y_exact(n, p)

    v = Fraction(4 * sgn * (n + 1), p * cnp) * (2 * p * hn - 2 * p * hp + 2 - 3 * p * p) * a1
    v -= Fraction(8 * sgn * (n + 1), cnp) * a2
    v += Fraction(4 * sgn * (n + 1), cnp) * (hn * hn - hn2 - 2 * hp * hn)
    v += Fraction(4 * sgn * (2 - 3 * p * p) * (n + 1), p * cnp) * hn
    v -= 4 * _psi3(n, p) / ff * (hn - hp)
    v += 4 * p * (n + 2) * (n + 1) ** 2 * (n * p + 2 + p) / ff * ((hn - hp) ** 2 - (hn2 - hp2))
    v += 2 * _psi4(n, p) / ff
    return v + e - e * e


@dataclass(frozen=True)
class AsymptoticConstants:
    p: int
    H_p: Fraction
    H_p2: Fraction
    const_mean_x: float
    const_var_x: float
    const_mean_y: float | None  # None for p = 1
    const_var_y: float | None
    gamma: float = EULER_GAMMA
    pi2_over_6: float = PI2_OVER_6


def asymptotic_constants(p: int) -> AsymptoticConstants:
    """Additive constants in ``2p log n + const`` for mean and variance."""
    if p < 1:
        raise ValueError("p must be positive")
    hp, hp2 = harmonic(p), harmonic2(p)
    base = -2 * p * float(hp) + 2 * p * EULER_GAMMA
    curv = -(2.0 / 3.0) * math.pi**2 * p * p + 4 * p * p * float(hp2)
    mean_x = base + 1 - 2 * p
    var_x = base + 4 * p - 2 + curv
    if p >= 2:
        mean_y = base + 3 - 2 * p - 2 * p / (p - 1)
        var_y = base + curv + 2 * (2 * p**3 - 5 * p**2 + 7 * p - 2) / (p - 1) ** 2
    else:
        mean_y = var_y = None
    return AsymptoticConstants(p, hp, hp2, mean_x, var_x, mean_y, var_y)


def lemma_variance_constant(p: int) -> float:
    """Variance constant as written in the expansion accompanying the exact variance."""
    if p < 2:
        raise ValueError("p must be at least 2")
    hp, hp2 = float(harmonic(p)), float(harmonic2(p))
    return (
        -2 * p * (hp - EULER_GAMMA)
        - 4 * p * p * (PI2_OVER_6 - hp2)
        + 2 * (-2 + 7 * p - 5 * p * p + 2 * p**3) / (1 - p) ** 2
    )


def mean_var_asym(kind: str, n: int, p: int) -> tuple[float, float]:
    """Asymptotic ``(mean, variance)`` of X or Y: ``2p ln n + constant``."""
    kind = kind.upper()
    if kind not in ("X", "Y"):
        raise ValueError("kind must be 'X' or 'Y'")
    if n < 1 or p < 1:
        raise ValueError("n and p must be positive")
    if kind == "Y" and p < 2:
        raise ValueError("Y_{n,1} = 1 identically; no asymptotic expansion")
    c = asymptotic_constants(p)
    lead = 2 * p * math.log(n)
    if kind == "X":
        return lead + c.const_mean_x, lead + c.const_var_x
    return lead + c.const_mean_y, lead + c.const_var_y


@dataclass(frozen=True)
class QuasiPowerModel:
    """``E[exp(s K_{n,p})] ~ exp(u(s) log n + v(s))`` for K in {X, Y}."""

    kind: str
    p: int
    u_of_s: Callable[[float], float]
    v_of_s: Callable[[float], float]
    uprime0: float
    udoubleprime0: float
    vprime0: float
    vdoubleprime0: float

    def log_mgf(self, n: int, s: float) -> float:
        return self.u_of_s(s) * math.log(n) + self.v_of_s(s)


def quasi_power_model(kind: str, p: int) -> QuasiPowerModel:
    kind = kind.upper()
    if kind not in ("X", "Y"):
        raise ValueError("kind must be 'X' or 'Y'")
    if p < 1 or (kind == "Y" and p < 2):
        raise ValueError(f"no quasi-power model for kind {kind} with p={p}")
    log_pfact = math.lgamma(p + 1)

    def u(s: float) -> float:
        return p * (2 * math.exp(s) - 2)

    if kind == "X":
        def v(s: float) -> float:
            w = math.exp(s)
            if 2 * w - 1 <= 0:
                raise ValueError("e^s must exceed 1/2")
            return (
                log_pfact
                + (2 * p - 1) * math.log(w / (2 * w - 1))
                - math.lgamma(p * (2 * w - 1) + 1)
            )
    else:
        def v(s: float) -> float:
            w = math.exp(s)
            denom = p * (2 * w - 1) - 1
            if 2 * w - 1 <= 0 or denom <= 0:
                raise ValueError(f"e^s={w} outside the domain of the Y prefactor")
            return (
                math.log(p - 1)
                + log_pfact
                + s
                + (2 * p - 2) * math.log(w / (2 * w - 1))
                - math.log(denom)
                - math.lgamma(p * (2 * w - 1) + 1)
            )

    c = asymptotic_constants(p)
    if kind == "X":
        v1, v2 = c.const_mean_x, c.const_var_x
    else:
        v1, v2 = c.const_mean_y, c.const_var_y
    return QuasiPowerModel(kind, p, u, v, 2.0 * p, 2.0 * p, v1, v2)


def moment_report(kind: str, n: int, p: int, table=None) -> MomentReport:
    """Exact moments with asymptotic predictions.

    Kind Y uses the closed forms; kind X needs an exact X ``table`` (only the
    asymptotics of X are available in closed form here).
    """
    kind = kind.upper()
    if kind == "Y":
        mean, var = expectation_y_exact(n, p), variance_y_exact(n, p)
        second = var - mean + mean * mean
    elif kind == "X":
        if table is None:
            raise ValueError("exact X moments require an X table")
        from .exactdist import moments_from_table

        r = moments_from_table(table, n, p)
        mean, var, second = r.mean_exact, r.variance_exact, r.second_factorial
    else:
        raise ValueError("kind must be 'X' or 'Y'")
    try:
        ma, va = mean_var_asym(kind, n, p)
    except ValueError:
        ma = va = float("nan")
    return MomentReport(n, p, kind, mean, var, second, ma, va)
