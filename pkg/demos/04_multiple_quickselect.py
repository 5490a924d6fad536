"""Multiple Quickselect on concrete data, and its pass count as a tree statistic."""

import random

from bstspan.mqs import multiple_quickselect, run_mqs_batch
from bstspan.treesim import build_bst, span_with_root_size

data = [41, 7, 93, 15, 62, 3, 88, 29, 54, 70]
res = multiple_quickselect(data, {2, 5, 9})
print("order statistics:", res.found, "passes:", res.passes)

# Each pass is one pivot: the pivots form the root paths of the wanted ranks
# in the BST built from the same sequence.
ranks_of = {v: i + 1 for i, v in enumerate(sorted(data))}
perm = [ranks_of[v] for v in data]
print("root-path union size in the BST:", span_with_root_size(build_bst(perm), {2, 5, 9}))

rng = random.Random(3)
for _ in range(1000):
    perm = rng.sample(range(1, 101), 100)
    ranks = rng.sample(range(1, 101), 4)
    assert multiple_quickselect(perm, ranks).passes == span_with_root_size(build_bst(perm), ranks)
print("1000 random instances at n=100 agree")

hist = run_mqs_batch(100, 20_000, seed=5, p=4)
mean = sum(k * v for k, v in hist.items()) / sum(hist.values())
print(f"average passes for 4 random ranks among 100 keys: {mean:.3f}")
