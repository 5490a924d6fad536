"""Exact integer and rational primitives.

Every exact quantity in the package is a :class:`fractions.Fraction`, which
is always normalized (lowest terms, positive denominator) and never rounds.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "Rational",
    "binomial",
    "harmonic",
    "harmonic2",
    "falling_factorial",
    "alt_harmonic_sum",
]

Rational = Fraction


def binomial(n: int, k: int) -> int:
    """C(n, k), with 0 outside 0 <= k <= n."""
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=None)
def _harmonic(n: int, power: int) -> Fraction:
    if n <= 0:
        return Fraction(0)
    # iterative fill keeps the cache warm without deep recursion
    total = Fraction(0)
    for k in range(1, n + 1):
        total += Fraction(1, k**power)
    return total


def harmonic(n: int) -> Fraction:
    """H_n = sum_{k=1}^n 1/k, exactly. H_0 = 0."""
    return _harmonic(n, 1)


def harmonic2(n: int) -> Fraction:
    """Second order harmonic number sum_{k=1}^n 1/k^2."""
    return _harmonic(n, 2)


def falling_factorial(x, m: int) -> Fraction:
    """x (x-1) ... (x-m+1); the empty product for m = 0 is 1."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    x = Fraction(x)
    out = Fraction(1)
    for j in range(m):
        out *= x - j
    return out


def alt_harmonic_sum(n: int, j_max: int, power: int) -> Fraction:
    """sum_{k=1}^{j_max} (-1)^(k-1) / k^power * C(n, k).

    With ``j_max = n`` this equals H_n for ``power=1`` and
    (H_n^2 + H_n^(2)) / 2 for ``power=2``.
    """
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    if j_max > n:
        raise ValueError(f"j_max={j_max} exceeds n={n}")
    total = Fraction(0)
    for k in range(1, j_max + 1):
        term = Fraction(math.comb(n, k), k**power)
        total += term if k % 2 else -term
    return total
