"""Random binary search trees, spanning-tree sizes, and Monte-Carlo batches.

Nodes are identified with their key rank ``1..n``; index ``0`` means "no
node".  Spanning-tree sizes count *nodes*, not edges: a single selected node
spans a tree of size 1 and two nodes at edge distance d span d + 1 nodes.

Two per-instance quantities are computed for a selected node set ``S``:

* ``X`` -- size of the union of the root paths of all nodes in ``S`` (the
  spanning tree of ``S`` together with the root);
* ``Y`` -- size of the minimal subtree containing ``S``.

They differ by the depth of the lowest common ancestor of ``S``.
"""

from __future__ import annotations

import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BstInstance",
    "SimSummary",
    "build_bst",
    "span_with_root_size",
    "lca",
    "lca_depth",
    "span_size",
    "instance_stats",
    "node_distance",
    "run_batch",
    "chunk_rng",
    "random_subsets",
]

DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class BstInstance:
    """Array-encoded BST on keys ``1..n``; every array has length ``n + 1``."""

    n: int
    root: int
    parent: tuple[int, ...]
    left_child: tuple[int, ...]
    right_child: tuple[int, ...]
    depth: tuple[int, ...]


def build_bst(perm: Sequence[int]) -> BstInstance:
    """Insert ``perm`` into an empty BST, first element becoming the root.

    The tree is built as the Cartesian tree of the keys with insertion time as
    heap priority, which is the same tree leaf insertion produces, in O(n).
    """
    n = len(perm)
    if n == 0:
        raise ValueError("empty permutation")
    time = [-1] * (n + 1)
    for t, key in enumerate(perm):
        key = int(key)
        if key < 1 or key > n:
            raise ValueError(f"key {key} outside 1..{n}")
        if time[key] != -1:
            raise ValueError(f"duplicate key {key}")
        time[key] = t

    parent = [0] * (n + 1)
    left = [0] * (n + 1)
    right = [0] * (n + 1)
    stack: list[int] = []
    for k in range(1, n + 1):
        tk = time[k]
        last = 0
        while stack and time[stack[-1]] > tk:
            last = stack.pop()
        if last:
            left[k] = last
            parent[last] = k
        if stack:
            top = stack[-1]
            right[top] = k
            parent[k] = top
        stack.append(k)

    depth = [0] * (n + 1)
    for key in perm[1:]:
        key = int(key)
        depth[key] = depth[parent[key]] + 1
    return BstInstance(
        n=n,
        root=stack[0],
        parent=tuple(parent),
        left_child=tuple(left),
        right_child=tuple(right),
        depth=tuple(depth),
    )


def _check_set(bst: BstInstance, S: Iterable[int]) -> list[int]:
    nodes = [int(s) for s in S]
    if not nodes:
        raise ValueError("node set must be nonempty")
    for s in nodes:
        if s < 1 or s > bst.n:
            raise ValueError(f"node {s} outside 1..{bst.n}")
    return nodes


def span_with_root_size(bst: BstInstance, S: Iterable[int]) -> int:
    """Number of nodes on the union of the root paths of ``S`` (this is X)."""
    nodes = _check_set(bst, S)
    parent = bst.parent
    marked = set()
    for s in nodes:
        while s and s not in marked:
            marked.add(s)
            s = parent[s]
    return len(marked)


def lca(bst: BstInstance, S: Iterable[int]) -> int:
    """Deepest common ancestor (inclusive) of all nodes in ``S``."""
    nodes = _check_set(bst, S)
    parent, depth = bst.parent, bst.depth
    a = nodes[0]
    for b in nodes[1:]:
        while a != b:
            if depth[a] >= depth[b]:
                a = parent[a]
            else:
                b = parent[b]
    return a


def lca_depth(bst: BstInstance, S: Iterable[int]) -> int:
    return bst.depth[lca(bst, S)]


def span_size(bst: BstInstance, S: Iterable[int]) -> int:
    """Node count of the minimal subtree containing ``S`` (this is Y)."""
    nodes = _check_set(bst, S)
    return span_with_root_size(bst, nodes) - lca_depth(bst, nodes)


def instance_stats(bst: BstInstance, S: Iterable[int]) -> tuple[int, int, int]:
    """``(X, Y, lca_depth)`` for one tree and node set."""
    nodes = _check_set(bst, S)
    x = span_with_root_size(bst, nodes)
    d = lca_depth(bst, nodes)
    return x, x - d, d


def node_distance(bst: BstInstance, a: int, b: int) -> int:
    """Edge distance between nodes ``a`` and ``b``."""
    if a == b:
        _check_set(bst, [a])
        return 0
    return span_size(bst, [a, b]) - 1


@dataclass
class SimSummary:
    n: int
    p: int
    trials: int
    seed: int
    hist_x: dict[int, int] = field(default_factory=dict)
    hist_y: dict[int, int] = field(default_factory=dict)
    hist_diff: dict[int, int] = field(default_factory=dict)
    method: str = "lazy"

    @staticmethod
    def _moments(hist: dict[int, int]) -> tuple[float, float]:
        # integer sums first so the result is independent of merge order
        cnt = sum(hist.values())
        s1 = sum(m * c for m, c in hist.items())
        s2 = sum(m * m * c for m, c in hist.items())
        mean = s1 / cnt
        var = (s2 * cnt - s1 * s1) / (cnt * (cnt - 1)) if cnt > 1 else 0.0
        return mean, var

    @property
    def sample_mean_x(self) -> float:
        return self._moments(self.hist_x)[0]

    @property
    def sample_var_x(self) -> float:
        return self._moments(self.hist_x)[1]

    @property
    def sample_mean_y(self) -> float:
        return self._moments(self.hist_y)[0]

    @property
    def sample_var_y(self) -> float:
        return self._moments(self.hist_y)[1]

    def pmf(self, kind: str) -> dict[int, float]:
        hist = {"X": self.hist_x, "Y": self.hist_y, "DIFF": self.hist_diff}[kind.upper()]
        return {m: c / self.trials for m, c in sorted(hist.items())}

    def to_dict(self) -> dict:
        def enc(h):
            return {str(k): v for k, v in sorted(h.items())}

        return {
            "n": self.n,
            "p": self.p,
            "trials": self.trials,
            "seed": self.seed,
            "method": self.method,
            "hist_x": enc(self.hist_x),
            "hist_y": enc(self.hist_y),
            "hist_diff": enc(self.hist_diff),
            "sample_mean_x": self.sample_mean_x,
            "sample_var_x": self.sample_var_x,
            "sample_mean_y": self.sample_mean_y,
            "sample_var_y": self.sample_var_y,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def csv_rows(self) -> list[tuple[str, int, int]]:
        rows = []
        for kind, hist in (("X", self.hist_x), ("Y", self.hist_y), ("DIFF", self.hist_diff)):
            rows.extend((kind, m, c) for m, c in sorted(hist.items()))
        return rows

    @classmethod
    def from_dict(cls, d: dict) -> "SimSummary":
        def dec(h):
            return {int(k): int(v) for k, v in h.items()}

        return cls(
            n=d["n"], p=d["p"], trials=d["trials"], seed=d["seed"],
            hist_x=dec(d["hist_x"]), hist_y=dec(d["hist_y"]),
            hist_diff=dec(d["hist_diff"]), method=d.get("method", "lazy"),
        )


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent stream for one fixed-size block of trials."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed & (2**64 - 1), chunk_index])))


def random_subsets(rng: np.random.Generator, n: int, p: int, size: int) -> np.ndarray:
    """``size`` uniform ``p``-subsets of ``1..n`` as a sorted ``(size, p)`` array.

    Vectorized Floyd sampling: at step ``j`` draw ``t`` uniform in ``1..j``
    and take ``j`` instead when ``t`` is already chosen.
    """
    out = np.empty((size, p), dtype=np.int64)
    for col, j in enumerate(range(n - p + 1, n + 1)):
        t = rng.integers(1, j + 1, size=size)
        if col:
            taken = (out[:, :col] == t[:, None]).any(axis=1)
            t = np.where(taken, j, t)
        out[:, col] = t
    out.sort(axis=1)
    return out


def _lazy_chunk(n: int, p: int, size: int, rng: np.random.Generator):
    """X, Y for ``size`` trials via recursive uniform pivots.

    Under the random permutation model the root of a BST on a key interval is
    uniform on it and its subtrees are again independent random BSTs, so only
    the pivots on the explored root paths need to be drawn.
    """
    sel = random_subsets(rng, n, p, size)
    xs = np.zeros(size, dtype=np.int64)
    ds = np.zeros(size, dtype=np.int64)
    cols = np.arange(p)

    trial = np.arange(size)
    lo = np.ones(size, dtype=np.int64)
    hi = np.full(size, n, dtype=np.int64)
    a = np.zeros(size, dtype=np.int64)
    b = np.full(size, p, dtype=np.int64)
    top = np.ones(size, dtype=bool)
    while trial.size:
        xs += np.bincount(trial, minlength=size)
        width = hi - lo + 1
        pivot = lo + np.minimum((rng.random(trial.size) * width).astype(np.int64), width - 1)
        rows = sel[trial]
        inside = (cols >= a[:, None]) & (cols < b[:, None])
        nl = (inside & (rows < pivot[:, None])).sum(axis=1)
        hit = (inside & (rows == pivot[:, None])).any(axis=1)
        cnt = b - a
        nr = cnt - nl - hit

        # the lca lies strictly below this pivot
        down = top & ~hit & ((nl == cnt) | (nr == cnt))
        ds += np.bincount(trial[down], minlength=size)

        gl = nl > 0
        gr = nr > 0
        trial = np.concatenate([trial[gl], trial[gr]])
        lo, hi = (
            np.concatenate([lo[gl], pivot[gr] + 1]),
            np.concatenate([pivot[gl] - 1, hi[gr]]),
        )
        a, b = (
            np.concatenate([a[gl], (a + nl + hit)[gr]]),
            np.concatenate([(a + nl)[gl], b[gr]]),
        )
        top = np.concatenate([down[gl], down[gr]])
    return xs, xs - ds


def _tree_chunk(n: int, p: int, size: int, rng: np.random.Generator):
    """X, Y for ``size`` trials by full Fisher-Yates permutations and BSTs."""
    xs = np.empty(size, dtype=np.int64)
    ys = np.empty(size, dtype=np.int64)
    for i in range(size):
        perm = rng.permutation(n) + 1
        bst = build_bst(perm.tolist())
        S = rng.choice(n, size=p, replace=False) + 1
        x, y, _ = instance_stats(bst, S.tolist())
        xs[i] = x
        ys[i] = y
    return xs, ys


def _counter(values: np.ndarray) -> Counter:
    keys, counts = np.unique(values, return_counts=True)
    return Counter(dict(zip(keys.tolist(), counts.tolist())))


def run_batch(
    n: int,
    p: int,
    trials: int,
    seed: int = 0,
    *,
    threads: int = 1,
    method: str = "lazy",
    chunk_size: int = DEFAULT_CHUNK,
) -> SimSummary:
    """Simulate ``trials`` independent (random BST, random p-subset) pairs.

    Trials are cut into blocks of ``chunk_size``; block ``i`` draws from the
    stream ``chunk_rng(seed, i)``, so the result depends only on
    ``(n, p, trials, seed, method, chunk_size)`` and never on ``threads``.

    ``method="lazy"`` draws only the pivots on the explored root paths and is
    fast for any ``n``; ``method="tree"`` builds the whole tree from an
    explicit permutation and is meant for cross-checking at small ``n``.
    """
    if n < 1 or p < 1 or p > n:
        raise ValueError(f"need 1 <= p <= n, got n={n}, p={p}")
    if trials < 1:
        raise ValueError("trials must be positive")
    if threads < 1:
        raise ValueError("threads must be positive")
    try:
        worker = {"lazy": _lazy_chunk, "tree": _tree_chunk}[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None

    sizes = [min(chunk_size, trials - start) for start in range(0, trials, chunk_size)]

    def job(i):
        xs, ys = worker(n, p, sizes[i], chunk_rng(seed, i))
        return _counter(xs), _counter(ys), _counter(xs - ys)

    if threads == 1:
        parts = [job(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, range(len(sizes))))

    hx, hy, hd = Counter(), Counter(), Counter()
    for cx, cy, cd in parts:
        hx.update(cx)
        hy.update(cy)
        hd.update(cd)
    return SimSummary(
        n=n, p=p, trials=trials, seed=seed,
        hist_x=dict(sorted(hx.items())), hist_y=dict(sorted(hy.items())),
        hist_diff=dict(sorted(hd.items())), method=method,
    )
