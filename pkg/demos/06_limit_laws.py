"""How close finite sizes are to the Gaussian and quasi-power limit forms."""

import math

from bstspan.exactdist import build_tables
from bstspan.moments import mean_var_asym, quasi_power_model
from bstspan.stats import ks_vs_normal, quasi_power_ratio
from bstspan.treesim import run_batch

# Exact pgf over the limit form; at s = 0 both sides are 1.
xt, yt = build_tables(120, 2)
for kind, table in (("X", xt), ("Y", yt)):
    model = quasi_power_model(kind, 2)
    for s in (math.log(1.1), -math.log(1.1)):
        devs = [abs(quasi_power_ratio(table, model, n, 2, s) - 1) for n in (30, 60, 120)]
        print(f"{kind} s={s:+.3f} deviation at n=30,60,120:", " ".join(f"{d:.4f}" for d in devs))

# KS of Y under two standardizations: leading-order and with the constant.
p = 2
for n in (10**3, 10**4, 10**5):
    s = run_batch(n, p, 50_000, seed=11)
    lead = 2 * p * math.log(n)
    mean, var = mean_var_asym("Y", n, p)
    print(f"n={n:>6}: KS leading-order {ks_vs_normal(s.hist_y, lead, math.sqrt(lead)):.3f}, "
          f"KS with constants {ks_vs_normal(s.hist_y, mean, math.sqrt(var)):.3f}")
