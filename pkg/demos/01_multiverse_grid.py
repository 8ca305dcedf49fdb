"""How variable is a benchmark ranking across design and analysis choices?

Builds a synthetic benchmark study (18 data sets, 13 methods, two
performance measures, occasional failed cross-validation iterations),
enumerates all 288 combinations of data-set subgroup, measure, imputation
rule, and aggregation rule, and prints the rank distribution each method
attains across the grid.

Run from the repository root:

    python demos/01_multiverse_grid.py
"""

import numpy as np

from benchfold import (
    AggregationStrategy,
    DatasetFilter,
    DatasetMeta,
    ImputationStrategy,
    MeasureSpec,
    MultiverseConfig,
    PerformanceTensor,
    Universe,
    enumerate_universes,
    rank_distribution,
    run_multiverse,
    validate_tensor,
)

rng = np.random.default_rng(2024)

# ---------------------------------------------------------------------------
# A synthetic study: methods have different true skill, skill varies with
# data-set size, and some methods fail occasionally.

ibrier = MeasureSpec(id="ibrier", orientation="lower_better",
                     random_value=0.25, best_value=0.0)
cindex = MeasureSpec(id="cindex", orientation="higher_better",
                     random_value=0.5, best_value=1.0)

datasets = []
for i in range(18):
    n = int(rng.integers(100, 1000))
    datasets.append(DatasetMeta(
        id=f"ds{i:02d}",
        clin=int(rng.integers(0, 10)),
        n=n,
        n_eff=int(rng.integers(20, n // 2)),
        p=int(rng.integers(200, 90000)),
    ))

methods = [f"method_{chr(97 + j)}" for j in range(13)]
skill = rng.uniform(-0.04, 0.04, size=13)          # overall quality offset
size_sensitivity = rng.uniform(-0.05, 0.05, 13)    # small-n vs large-n
fail_rate = rng.uniform(0.0, 0.15, size=13)

cells = {}
for d in datasets:
    small = d.n < np.median([x.n for x in datasets])
    for j, m in enumerate(methods):
        base = 0.17 + skill[j] + (size_sensitivity[j] if small else 0.0)
        n_iter = 10
        failed = rng.random(n_iter) < fail_rate[j]
        ib = np.clip(base + rng.normal(0, 0.02, n_iter), 0.01, 0.4)
        ci = np.clip(0.72 - 1.2 * (base - 0.17) + rng.normal(0, 0.03, n_iter),
                     0.45, 0.95)
        cells[(d.id, m, "ibrier")] = tuple(
            None if failed[t] else float(ib[t]) for t in range(n_iter))
        cells[(d.id, m, "cindex")] = tuple(
            None if failed[t] else float(ci[t]) for t in range(n_iter))

tensor = PerformanceTensor.build(datasets, methods, [ibrier, cindex], cells)
assert validate_tensor(tensor) == []

# ---------------------------------------------------------------------------
# The full option grid: 9 data-set filters x 2 measures x 4 imputations
# x 4 aggregations = 288 universes.

filters = [DatasetFilter(kind="all")] + [
    DatasetFilter(kind="median_split", characteristic=ch, side=side)
    for ch in ("clin", "n", "n_eff", "p")
    for side in ("below", "at_or_above")
]
imputations = [ImputationStrategy(kind=k) for k in
               ("threshold20", "weighted", "random_prediction", "mean_nonfailed")]
aggregations = [AggregationStrategy(kind=k) for k in
                ("mean", "median", "mean_rank", "best005")]
config = MultiverseConfig(
    filters=filters,
    measures=("ibrier", "cindex"),
    imputations=imputations,
    aggregations=aggregations,
    defaults=Universe(filter=filters[0], measure="ibrier",
                      imputation=imputations[0], aggregation=aggregations[0]),
)

universes = enumerate_universes(config)
print(f"option grid: {len(universes)} universes")

table = run_multiverse(tensor, config)
print(f"evaluated rankings: {len(table)} x {len(table.methods)}\n")

# ---------------------------------------------------------------------------
# Rank distribution: how good and how bad can each method look?

dist = rank_distribution(table)
print(f"{'method':<12} {'best':>5} {'worst':>6}   rank histogram (rank:count)")
for m in methods:
    entry = dist[m]
    hist = " ".join(f"{r:g}:{c}" for r, c in sorted(entry["counts"].items()))
    print(f"{m:<12} {entry['min']:>5g} {entry['max']:>6g}   {hist}")

reach_rank1 = sum(1 for m in methods if dist[m]["min"] == 1.0)
print(f"\n{reach_rank1} of {len(methods)} methods reach rank 1 for at "
      f"least one combination of choices.")
