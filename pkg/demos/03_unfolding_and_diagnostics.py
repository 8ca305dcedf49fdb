"""Unfolding the ranking table, with goodness-of-fit diagnostics.

Fits a two-dimensional penalized-stress ordinal unfolding of the 288
rankings: every universe becomes an ideal point, every method an object
point, and small distances mean high preference. Then checks the fit with
a permutation test, stress-per-point shares, a scree curve, and the
ideal-point distances between default and alternative options.

    python demos/03_unfolding_and_diagnostics.py
"""

import os
from importlib.machinery import SourceFileLoader

import numpy as np

from benchfold import (
    UnfoldOptions,
    default_option_distances,
    fit,
    permutation_test,
    run_multiverse,
    scree,
    stress_per_point,
)

_here = os.path.dirname(__file__)
grid_demo = SourceFileLoader(
    "grid_demo", os.path.join(_here, "01_multiverse_grid.py")).load_module()
tensor, config = grid_demo.tensor, grid_demo.config

table = run_multiverse(tensor, config)
options = UnfoldOptions(dim=2, n_starts=4, seed=42, eps=1e-7, max_iter=2000)
solution = fit(table.ranks, options)

print(f"\npenalized stress: {solution.stress_penalized:.4f} "
      f"({solution.iterations} iterations, converged={solution.converged})")

# object points: methods near the origin of the ideal-point cloud are
# ranked well by most universes
center = solution.Z1.mean(axis=0)
spread = np.linalg.norm(solution.Z2 - center, axis=1)
order = np.argsort(spread)
print("\nmethods from centre (broadly preferred) to periphery:")
for j in order:
    print(f"  {table.methods[j]:<12} distance to ideal-point centre "
          f"{spread[j]:.2f}")

# permutation test: is there structure beyond chance?
perm = permutation_test(table.ranks, UnfoldOptions(n_starts=1, seed=0,
                                                   eps=1e-6, max_iter=200),
                        n_perm=99, seed=7)
print(f"\npermutation test: p = {perm.p_value:.3f} "
      f"(observed stress {perm.observed_stress:.4f}, "
      f"null range {min(perm.permuted_stress):.4f}"
      f"-{max(perm.permuted_stress):.4f})")

# stress per point: no universe or method should dominate the misfit
rows, cols = stress_per_point(solution)
print(f"max universe-side SPP share: {rows.max():.2f}% "
      f"(uniform would be {100 / len(table):.2f}%)")
print(f"max method-side SPP share:   {cols.max():.2f}% "
      f"(uniform would be {100 / len(table.methods):.2f}%)")

# scree: stress by dimension
curve = scree(table.ranks, UnfoldOptions(n_starts=2, seed=1, eps=1e-6,
                                         max_iter=400), dims=[1, 2, 3, 4])
print("\nscree (penalized stress by dimension):")
for dim, value in sorted(curve.items()):
    print(f"  dim {dim}: {value:.4f}")

# which choice moves the ideal points the most?
distances = default_option_distances(solution, table, config)
by_choice = {}
for d in distances:
    by_choice.setdefault((d.choice, d.option_label), []).append(d.distance)
print("\nmedian ideal-point shift when one choice leaves its default:")
for (choice, option), vals in sorted(by_choice.items()):
    print(f"  {choice:<12} -> {option:<16} median {np.median(vals):.3f} "
          f"(n={len(vals)})")
