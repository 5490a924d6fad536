"""Multiple Quickselect with pass counting.

Each recursive call that partitions a segment is one *pass*.  The pivot is
the first element of the segment and the partition is order preserving, so
for a permutation input the recursion visits exactly the nodes of the BST
built from that permutation that lie on root paths of the requested ranks.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .treesim import DEFAULT_CHUNK, build_bst, chunk_rng, random_subsets, span_with_root_size

__all__ = ["MqsResult", "multiple_quickselect", "passes_equal_tree", "run_mqs_batch"]


@dataclass
class MqsResult:
    found: dict[int, Any] = field(default_factory=dict)
    passes: int = 0


def multiple_quickselect(data: Sequence, ranks: Iterable[int]) -> MqsResult:
    """Find the elements of the given 1-based ``ranks`` in ``data``."""
    items = list(data)
    n = len(items)
    if len(set(items)) != n:
        raise ValueError("keys must be distinct")
    wanted = sorted(set(int(r) for r in ranks))
    if wanted and (wanted[0] < 1 or wanted[-1] > n):
        raise ValueError(f"ranks must lie in 1..{n}")

    result = MqsResult()
    # (segment, rank offset, ranks inside the segment)
    stack = [(items, 0, wanted)] if wanted else []
    while stack:
        seg, offset, rs = stack.pop()
        result.passes += 1
        pivot = seg[0]
        smaller = [x for x in seg[1:] if x < pivot]
        larger = [x for x in seg[1:] if x > pivot]
        pos = offset + len(smaller) + 1
        left = [r for r in rs if r < pos]
        right = [r for r in rs if r > pos]
        if len(left) + len(right) < len(rs):
            result.found[pos] = pivot
        if right:
            stack.append((larger, pos, right))
        if left:
            stack.append((smaller, offset, left))
    result.found = dict(sorted(result.found.items()))
    return result


def passes_equal_tree(perm: Sequence[int], ranks: Iterable[int]) -> bool:
    """Whether the pass count equals the root-spanning-tree size of ``ranks``."""
    ranks = list(ranks)
    passes = multiple_quickselect(perm, ranks).passes
    return passes == span_with_root_size(build_bst(perm), ranks)


def run_mqs_batch(
    n: int,
    trials: int,
    seed: int = 0,
    *,
    p: int | None = None,
    ranks: Sequence[int] | None = None,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK,
) -> dict[int, int]:
    """Histogram of pass counts over random permutations of ``1..n``.

    Either a fixed ``ranks`` set or a size ``p`` (a fresh uniform rank set
    per trial) must be given.  Deterministic in ``seed`` regardless of
    ``threads``.
    """
    if (p is None) == (ranks is None):
        raise ValueError("give exactly one of p or ranks")
    if n < 1 or trials < 1:
        raise ValueError("n and trials must be positive")
    if p is not None and not (1 <= p <= n):
        raise ValueError(f"need 1 <= p <= n, got p={p}")
    fixed = None if ranks is None else sorted(set(int(r) for r in ranks))
    if fixed is not None and fixed and (fixed[0] < 1 or fixed[-1] > n):
        raise ValueError(f"ranks must lie in 1..{n}")

    sizes = [min(chunk_size, trials - start) for start in range(0, trials, chunk_size)]
    base = np.arange(1, n + 1)

    def job(i):
        rng = chunk_rng(seed, i)
        perms = rng.permuted(np.tile(base, (sizes[i], 1)), axis=1).tolist()
        sets = random_subsets(rng, n, p, sizes[i]).tolist() if fixed is None else None
        hist = Counter()
        for t, perm in enumerate(perms):
            hist[multiple_quickselect(perm, fixed if sets is None else sets[t]).passes] += 1
        return hist

    if threads == 1:
        parts = [job(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    total = Counter()
    for h in parts:
        total.update(h)
    return dict(sorted(total.items()))
