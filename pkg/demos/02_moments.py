"""Exact mean and variance of Y and how fast they approach 2p ln n + const."""

import math

from bstspan.moments import (
    asymptotic_constants,
    expectation_y_exact,
    mean_var_asym,
    variance_y_exact,
)

p = 2
print(" n      E[Y] exact    E[Y] asym    gap        Var exact   Var asym")
for n in (10, 100, 1000, 5000):
    mean, var = expectation_y_exact(n, p), variance_y_exact(n, p)
    mean_a, var_a = mean_var_asym("Y", n, p)
    print(f"{n:5d}  {float(mean):11.5f}  {mean_a:11.5f}  {abs(float(mean) - mean_a):.5f}"
          f"  {float(var):10.4f}  {var_a:10.4f}")

# The mean gap shrinks roughly like ln(n)/n.
gap = abs(float(expectation_y_exact(5000, p)) - mean_var_asym("Y", 5000, p)[0])
print(f"gap * n / ln n at n=5000: {gap * 5000 / math.log(5000):.2f}")

c = asymptotic_constants(p)
print(f"constants for p={p}: mean X {c.const_mean_x:.6f}, mean Y {c.const_mean_y:.6f}")
print(f"E[X-Y] limit: {c.const_mean_x - c.const_mean_y:.6f}")
