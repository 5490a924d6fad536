"""Monte-Carlo histograms against exact pmfs, and the thread-count invariance."""

from bstspan.exactdist import build_tables, pmf
from bstspan.stats import tv_distance
from bstspan.treesim import run_batch

n, p, trials = 30, 2, 200_000
xt, yt = build_tables(n, p)

s = run_batch(n, p, trials, seed=1)
for kind, table in (("X", xt), ("Y", yt)):
    exact = {m: float(pr) for m, pr in pmf(table, n, p)}
    print(f"{kind}: sample mean {getattr(s, 'sample_mean_' + kind.lower()):.4f}, "
          f"TV to exact {tv_distance(s.pmf(kind), exact):.4f}")

# The literal construction (shuffle, insert, mark) gives the same law.
t = run_batch(n, p, 20_000, seed=1, method="tree")
print("tree method TV for Y:", round(tv_distance(t.pmf("Y"), {m: float(q) for m, q in pmf(yt, n, p)}), 4))

# Chunked seeding makes the result independent of the number of threads.
a = run_batch(500, 3, 100_000, seed=7, threads=1)
b = run_batch(500, 3, 100_000, seed=7, threads=4)
print("identical across thread counts:", a.to_json() == b.to_json())
