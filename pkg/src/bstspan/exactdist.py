"""Exact distributions of X (passes / spanning tree with root) and Y
(spanning tree of the selected nodes).

The table for a kind stores ``w[n][p][m] = C(n, p) * P{kind_{n,p} = m}``,
i.e. the coefficient of ``z^n v^m`` in the generating function of
``p``-selections.  Internally each ``(n, p)`` cell holds the integer
polynomial ``n! * w[n][p][.]`` -- the number of (permutation, p-subset)
pairs with the given value -- packed into one Python integer with a fixed
number of bits per power of ``v``.  Products of polynomials then become
single big-integer products, and the recurrences run in exact integer
arithmetic with no division at all.

Recurrences (``c`` = X counts, ``y`` = Y counts, ``n >= 0``, ``p >= 1``)::

    c[n+1][p] = v * (S_p[n] + S_{p-1}[n])
    y[n+1][p] = v * (S_p[n] - 2 E_p[n] + S_{p-1}[n]) + 2 sum_k C(n,k) (n-k)! y[k][p]

with ``S_q[n] = sum_{i<=q} sum_k C(n,k) c[k][i] c[n-k][q-i]`` and
``E_p[n] = sum_k C(n,k) k! c[n-k][p]`` (the ``i = 0`` and ``i = p`` terms,
which are equal).
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

try:
    from gmpy2 import mpz as _big
except ImportError:  # pragma: no cover - plain ints give identical results, slower
    _big = int

from .combinatorics import binomial
from .treesim import build_bst, instance_stats

__all__ = [
    "TableTooLarge",
    "WeightedDistTable",
    "VSliceTable",
    "estimate_table_bytes",
    "DEFAULT_MEMORY_BUDGET",
    "build_x_table",
    "build_y_table",
    "build_tables",
    "vslice_table",
    "pmf",
    "pgf",
    "moments_from_table",
    "brute_force_pmfs",
    "root_in_span_prob",
]


class TableTooLarge(MemoryError):
    """Requested table exceeds the configured memory budget."""


def _cell_bits(n_max: int, p_max: int) -> int:
    # every coefficient is at most the total count (n_max+1)! C(n_max+1, p) of the
    # next layer, which also bounds all intermediate sums
    bound = math.factorial(n_max + 1) * max(math.comb(n_max + 1, q) for q in range(p_max + 1))
    return bound.bit_length() + 2


def estimate_table_bytes(n_max: int, p_max: int) -> int:
    """Approximate footprint of one packed table."""
    bits = _cell_bits(n_max, p_max)
    total = 0
    for n in range(n_max + 1):
        total += (min(n, p_max) + 1) * (n + 1) * bits
    return total // 8


DEFAULT_MEMORY_BUDGET = estimate_table_bytes(160, 5)


def _check_size(n_max: int, p_max: int, budget: int | None) -> None:
    if n_max < 1 or p_max < 1:
        raise ValueError("n_max and p_max must be positive")
    if p_max > n_max:
        raise ValueError(f"p_max={p_max} exceeds n_max={n_max}")
    budget = DEFAULT_MEMORY_BUDGET if budget is None else budget
    need = estimate_table_bytes(n_max, p_max)
    if need > budget:
        raise TableTooLarge(
            f"table (n_max={n_max}, p_max={p_max}) needs ~{need} bytes, budget is {budget}"
        )


def _unpack(value, bits: int) -> list[int]:
    mask = (_big(1) << bits) - 1
    out = []
    while value:
        out.append(int(value & mask))
        value >>= bits
    return out


def _pack(coeffs, bits: int):
    value = _big(0)
    for c in reversed(list(coeffs)):
        value = (value << bits) | _big(c)
    return value


@dataclass(frozen=True, eq=False)
class WeightedDistTable:
    """Exact table ``w[n][p][m] = C(n,p) P{kind_{n,p} = m}``.

    ``cells[n][p]`` is the packed integer polynomial ``n! * w[n][p][.]`` for
    ``0 <= p <= min(n, p_max)``.
    """

    kind: str
    n_max: int
    p_max: int
    bits: int
    cells: tuple[tuple[int, ...], ...]

    def _check(self, n: int, p: int) -> None:
        if not (0 <= n <= self.n_max):
            raise IndexError(f"n={n} outside 0..{self.n_max}")
        if not (0 <= p <= min(n, self.p_max)):
            raise IndexError(f"p={p} outside 0..{min(n, self.p_max)} for n={n}")

    def counts(self, n: int, p: int) -> list[int]:
        """Coefficients of ``n! * w[n][p][.]`` indexed by ``m``."""
        self._check(n, p)
        return _unpack(self.cells[n][p], self.bits)

    def weights(self, n: int, p: int) -> dict[int, Fraction]:
        """Nonzero ``w[n][p][m]`` as exact fractions."""
        nf = math.factorial(n)
        return {m: Fraction(c, nf) for m, c in enumerate(self.counts(n, p)) if c}

    def weight(self, n: int, p: int, m: int) -> Fraction:
        cs = self.counts(n, p)
        return Fraction(cs[m], math.factorial(n)) if 0 <= m < len(cs) else Fraction(0)

    def covers(self, n: int, p: int) -> bool:
        return 0 <= n <= self.n_max and 0 <= p <= min(n, self.p_max)

    def to_dict(self) -> dict:
        entries = []
        for n in range(self.n_max + 1):
            for p in range(min(n, self.p_max) + 1):
                for m, w in sorted(self.weights(n, p).items()):
                    entries.append(
                        {"n": n, "p": p, "m": m, "num": str(w.numerator), "den": str(w.denominator)}
                    )
        return {"kind": self.kind, "n_max": self.n_max, "p_max": self.p_max, "entries": entries}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "WeightedDistTable":
        kind, n_max, p_max = d["kind"].upper(), int(d["n_max"]), int(d["p_max"])
        bits = _cell_bits(n_max, p_max)
        grid = [[[0] * (n + 1) for _ in range(min(n, p_max) + 1)] for n in range(n_max + 1)]
        for e in d["entries"]:
            n, p, m = int(e["n"]), int(e["p"]), int(e["m"])
            c = Fraction(int(e["num"]), int(e["den"])) * math.factorial(n)
            if c.denominator != 1 or c < 0:
                raise ValueError(f"entry ({n},{p},{m}) is not a valid weight")
            grid[n][p][m] = c.numerator
        cells = tuple(tuple(_pack(row, bits) for row in layer) for layer in grid)
        return cls(kind, n_max, p_max, bits, cells)

    @classmethod
    def from_json(cls, text: str) -> "WeightedDistTable":
        return cls.from_dict(json.loads(text))


def _conv_layer(c, n: int, q: int, binoms: list[int]) -> int:
    """sum_{i=1}^{q-1} sum_k C(n,k) c[k][i] c[n-k][q-i], using k <-> n-k symmetry."""
    total = 0
    for k in range(n + 1):
        row_k = c[k]
        row_r = c[n - k]
        acc = 0
        for i in range(max(1, q - (n - k)), min(q - 1, k) + 1):
            if q - i < len(row_r):
                acc += row_k[i] * row_r[q - i]
        if acc:
            total += binoms[k] * acc
    return total


def _layer_sums(c, n: int, top: int, fact: list[int]) -> tuple[list[int], list[int]]:
    """Interior sums ``T[q]`` and full sums ``S[q]`` of layer ``n`` for ``q <= top``."""
    binoms = [_big(math.comb(n, k)) for k in range(n + 1)]
    T = [0] * (top + 1)
    S = [fact[n + 1]] + [0] * top
    for q in range(1, top + 1):
        T[q] = _conv_layer(c, n, q, binoms)
        edge = 0
        for k in range(n - q + 1):
            edge += binoms[k] * fact[k] * c[n - k][q]
        S[q] = T[q] + 2 * edge
    return T, S


def _x_layer(c, n: int, p_max: int, fact, shift):
    top = min(n + 1, p_max)
    T, S = _layer_sums(c, n, top, fact)
    return T, S, [fact[n + 1]] + [shift * (S[p] + S[p - 1]) for p in range(1, top + 1)]


def _y_layer(y, n: int, p_max: int, T, S, fact, shift):
    top = min(n + 1, p_max)
    new_y = [fact[n + 1]]
    for p in range(1, top + 1):
        # F_0 F_p term: sum_k C(n,k) (n-k)! y[k][p] = sum_k (n!/k!) y[k][p]
        acc = 0
        for k in range(p, n + 1):
            acc += (fact[n] // fact[k]) * y[k][p]
        new_y.append(shift * (T[p] + S[p - 1]) + 2 * acc)
    return new_y


def _setup(n_max: int, p_max: int):
    bits = _cell_bits(n_max, p_max)
    fact = [_big(math.factorial(k)) for k in range(n_max + 2)]
    return bits, _big(1) << bits, fact


def _freeze(kind, n_max, p_max, bits, rows) -> WeightedDistTable:
    return WeightedDistTable(kind, n_max, p_max, bits, tuple(tuple(r) for r in rows))


def _build_x(n_max: int, p_max: int, memory_budget: int | None) -> WeightedDistTable:
    _check_size(n_max, p_max, memory_budget)
    bits, shift, fact = _setup(n_max, p_max)
    c = [[_big(1)]]
    for n in range(n_max):
        c.append(_x_layer(c, n, p_max, fact, shift)[2])
    return _freeze("X", n_max, p_max, bits, c)


def _build_y(xt: WeightedDistTable, n_max: int, p_max: int) -> WeightedDistTable:
    bits, shift, fact = _setup(n_max, p_max)
    c = xt.cells
    y = [[_big(1)]]
    for n in range(n_max):
        T, S = _layer_sums(c, n, min(n + 1, p_max), fact)
        y.append(_y_layer(y, n, p_max, T, S, fact, shift))
    return _freeze("Y", n_max, p_max, bits, y)


def build_x_table(n_max: int, p_max: int, *, memory_budget: int | None = None) -> WeightedDistTable:
    """Exact X table from the pass-count recurrence."""
    return _build_x(n_max, p_max, memory_budget)


def build_y_table(
    n_max: int,
    p_max: int,
    x_table: WeightedDistTable | None = None,
    *,
    memory_budget: int | None = None,
) -> WeightedDistTable:
    """Exact Y table; the recurrence reads the X cells of ``x_table``.

    ``x_table`` must be an X table built with the same ``(n_max, p_max)``
    (the packing width depends on both); it is built when omitted.
    """
    _check_size(n_max, p_max, memory_budget)
    if x_table is None:
        x_table = _build_x(n_max, p_max, memory_budget)
    if x_table.kind != "X":
        raise ValueError("x_table must be an X table")
    if (x_table.n_max, x_table.p_max) != (n_max, p_max):
        raise ValueError(
            f"x_table covers ({x_table.n_max}, {x_table.p_max}), need ({n_max}, {p_max})"
        )
    return _build_y(x_table, n_max, p_max)


def build_tables(n_max: int, p_max: int, *, memory_budget: int | None = None):
    """``(x_table, y_table)`` in one pass, sharing the layer convolutions."""
    _check_size(n_max, p_max, memory_budget)
    bits, shift, fact = _setup(n_max, p_max)
    c = [[_big(1)]]
    y = [[_big(1)]]
    for n in range(n_max):
        T, S, new_c = _x_layer(c, n, p_max, fact, shift)
        y.append(_y_layer(y, n, p_max, T, S, fact, shift))
        c.append(new_c)
    return _freeze("X", n_max, p_max, bits, c), _freeze("Y", n_max, p_max, bits, y)


def pmf(table: WeightedDistTable, n: int, p: int) -> list[tuple[int, Fraction]]:
    """``[(m, P{kind_{n,p} = m})]`` over the support, summing to exactly 1."""
    counts = table.counts(n, p)
    total = math.factorial(n) * binomial(n, p)
    return [(m, Fraction(cnt, total)) for m, cnt in enumerate(counts) if cnt]


def pgf(table: WeightedDistTable, n: int, p: int, v):
    """``E[v^kind_{n,p}]``; exact for rational ``v``, float/complex otherwise."""
    dist = pmf(table, n, p)
    if isinstance(v, (int, Fraction)):
        v = Fraction(v)
        return sum((prob * v**m for m, prob in dist), Fraction(0))
    # Horner in floating point on the probability vector
    probs = [0.0] * (dist[-1][0] + 1)
    for m, prob in dist:
        probs[m] = float(prob)
    acc = 0.0 * v
    for prob in reversed(probs):
        acc = acc * v + prob
    return acc


def moments_from_table(table: WeightedDistTable, n: int, p: int):
    """Exact mean, second factorial moment and variance from a table row.

    Returns a :class:`bstspan.moments.MomentReport` whose asymptotic fields
    are filled when the asymptotic formula applies to ``(kind, p)``.
    """
    from .moments import MomentReport, mean_var_asym

    dist = pmf(table, n, p)
    mean = sum((m * pr for m, pr in dist), Fraction(0))
    m2 = sum((m * (m - 1) * pr for m, pr in dist), Fraction(0))
    var = m2 + mean - mean * mean
    try:
        mean_a, var_a = mean_var_asym(table.kind, n, p)
    except ValueError:
        mean_a = var_a = float("nan")
    return MomentReport(
        n=n, p=p, kind=table.kind, mean_exact=mean, variance_exact=var,
        second_factorial=m2, mean_asym=mean_a, variance_asym=var_a,
    )


@dataclass(frozen=True, eq=False)
class VSliceTable:
    """Numeric table ``a[n][p] = sum_m w[n][p][m] v^m`` at one fixed ``v``.

    Covers every ``p <= n <= n_max``.  Built from the same recurrences as the
    exact tables but in complex floating point, which makes full-``p``
    coverage at ``n`` in the hundreds cheap.
    """

    kind: str
    n_max: int
    v: complex
    values: np.ndarray  # shape (n_max+1, n_max+1)


def vslice_table(kind: str, n_max: int, v) -> VSliceTable:
    kind = kind.upper()
    if kind not in ("X", "Y"):
        raise ValueError("kind must be 'X' or 'Y'")
    v = complex(v)
    N = n_max
    A = np.zeros((N + 1, N + 1), dtype=complex)
    A[:, 0] = 1.0
    B = np.zeros((N + 1, N + 1), dtype=complex)
    B[:, 0] = 1.0
    prefix_b = np.zeros(N + 1, dtype=complex)  # sum_{k<=n} B[k][p]
    for n in range(N):
        left = A[: n + 1]
        right = A[n::-1]
        top = n + 1
        S = np.empty(top + 1, dtype=complex)
        for q in range(top + 1):
            S[q] = np.sum(left[:, : q + 1] * right[:, q::-1])
        A[n + 1, 1 : top + 1] = v * (S[1:] + S[:-1]) / (n + 1)
        if kind == "Y":
            prefix_b += B[n]
            # i = 0 and i = q terms: 2 sum_k A[n-k][q] (A[k][0] = 1)
            edge = 2.0 * A[: n + 1, 1 : top + 1].sum(axis=0)
            B[n + 1, 1 : top + 1] = (
                v * (S[1:] - edge + S[:-1]) + 2.0 * prefix_b[1 : top + 1]
            ) / (n + 1)
    return VSliceTable(kind, N, v, B if kind == "Y" else A)


@lru_cache(maxsize=None)
def _distinct_trees(n: int) -> tuple[tuple[object, int], ...]:
    """Every BST on ``n`` keys with the number of permutations producing it."""
    shapes: Counter = Counter()
    reps = {}
    for perm in itertools.permutations(range(1, n + 1)):
        bst = build_bst(perm)
        shapes[bst.parent] += 1
        reps.setdefault(bst.parent, bst)
    return tuple((reps[key], cnt) for key, cnt in shapes.items())


BRUTE_FORCE_MAX_N = 9


def brute_force_pmfs(n: int, p: int):
    """Exact pmfs of X, Y and (X, Y) by enumerating all permutations and subsets.

    Returns three dicts ``{m: Fraction}``, ``{m: Fraction}``,
    ``{(x, y): Fraction}``.
    """
    if n < 1 or n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force limited to 1 <= n <= {BRUTE_FORCE_MAX_N}")
    if p < 1 or p > n:
        raise ValueError(f"need 1 <= p <= n, got p={p}")
    joint: Counter = Counter()
    subsets = list(itertools.combinations(range(1, n + 1), p))
    for bst, mult in _distinct_trees(n):
        for S in subsets:
            x, y, _ = instance_stats(bst, S)
            joint[(x, y)] += mult
    total = math.factorial(n) * len(subsets)
    px: Counter = Counter()
    py: Counter = Counter()
    for (x, y), cnt in joint.items():
        px[x] += cnt
        py[y] += cnt
    return (
        {m: Fraction(c, total) for m, c in sorted(px.items())},
        {m: Fraction(c, total) for m, c in sorted(py.items())},
        {k: Fraction(c, total) for k, c in sorted(joint.items())},
    )


def root_in_span_prob(n: int, p: int) -> Fraction:
    """P{X_{n,p} = Y_{n,p}}: the root lies in the spanning tree of the selection.

    The root has key ``j + 1`` with ``j`` uniform on ``0..n-1``; it is missed
    exactly when all ``p`` selected keys fall on one side, which by the
    hockey-stick identity happens with probability ``2 C(n, p+1) / (n C(n, p))``.
    """
    if p < 1 or p > n:
        raise ValueError(f"need 1 <= p <= n, got n={n}, p={p}")
    return 1 - Fraction(2 * (n - p), n * (p + 1))
