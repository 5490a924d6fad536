"""Exact laws of X (quickselect passes) and Y (spanning subtree size).

Builds the exact tables once, prints a few pmfs as fractions, and checks one
of them against brute-force enumeration over every permutation and subset.
"""

from bstspan.exactdist import brute_force_pmfs, build_tables, pmf, root_in_span_prob

xt, yt = build_tables(20, 3)

# Small case first: with n=4 keys and p=2 targets everything is enumerable.
print("X_{4,2}:", [(m, str(pr)) for m, pr in pmf(xt, 4, 2)])
print("Y_{4,2}:", [(m, str(pr)) for m, pr in pmf(yt, 4, 2)])

px, py, joint = brute_force_pmfs(6, 3)
assert dict(pmf(xt, 6, 3)) == px and dict(pmf(yt, 6, 3)) == py
print("n=6, p=3: table pmfs equal the brute-force pmfs")

# X and Y coincide exactly when the root is on the spanning subtree.
same = sum(pr for (x, y), pr in joint.items() if x == y)
print(f"P(X=Y) at n=6, p=3: {same} (formula {root_in_span_prob(6, 3)})")

# A larger size: the distribution of Y_{20,3} as floats.
for m, pr in pmf(yt, 20, 3):
    print(f"  Y_(20,3) = {m:2d}: {float(pr):.5f}")
