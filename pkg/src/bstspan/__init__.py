"""Spanning-tree sizes in random binary search trees and Multiple Quickselect passes.

``X_{n,p}`` counts the passes Multiple Quickselect needs to find ``p``
random order statistics among ``n`` keys; equivalently the node count of the
union of root paths of ``p`` random nodes in a random BST.  ``Y_{n,p}`` is
the node count of the minimal subtree spanning the ``p`` nodes alone.
"""

__version__ = "0.1.0"

from .combinatorics import alt_harmonic_sum, binomial, falling_factorial, harmonic, harmonic2
from .exactdist import (
    WeightedDistTable,
    brute_force_pmfs,
    build_tables,
    build_x_table,
    build_y_table,
    pgf,
    pmf,
    root_in_span_prob,
)
from .moments import (
    expectation_y_exact,
    mean_var_asym,
    quasi_power_model,
    variance_y_exact,
)
from .mqs import multiple_quickselect
from .treesim import build_bst, run_batch, span_size, span_with_root_size

__all__ = [
    "alt_harmonic_sum", "binomial", "falling_factorial", "harmonic", "harmonic2",
    "WeightedDistTable", "brute_force_pmfs", "build_tables", "build_x_table", "build_y_table",
    "pgf", "pmf", "root_in_span_prob", "expectation_y_exact", "mean_var_asym",
    "quasi_power_model", "variance_y_exact", "multiple_quickselect", "build_bst", "run_batch",
    "span_size", "span_with_root_size",
]
