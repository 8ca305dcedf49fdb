"""Shared builders for synthetic benchmark studies."""

import numpy as np
import pytest

from benchfold import (
    AggregationStrategy,
    DatasetFilter,
    DatasetMeta,
    ImputationStrategy,
    MeasureSpec,
    MultiverseConfig,
    PerformanceTensor,
    Universe,
)

IBRIER = MeasureSpec(id="ibrier", orientation="lower_better",
                     random_value=0.25, best_value=0.0)
CINDEX = MeasureSpec(id="cindex", orientation="higher_better",
                     random_value=0.5, best_value=1.0)


def make_datasets(n, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        total = int(rng.integers(80, 600))
        out.append(
            DatasetMeta(
                id=f"d{i:02d}",
                clin=int(rng.integers(0, 12)),
                n=total,
                n_eff=int(rng.integers(5, total + 1)),
                p=int(rng.integers(50, 5000)),
            )
        )
    return out


def make_tensor(n_datasets=4, n_methods=5, measures=(IBRIER, CINDEX),
                iterations=10, failure_rate=0.1, seed=0):
    """Random but valid tensor; failures are injected per iteration slot."""
    rng = np.random.default_rng(seed)
    datasets = make_datasets(n_datasets, seed=seed + 1)
    methods = [f"m{j}" for j in range(n_methods)]
    cells = {}
    for d in datasets:
        for me in methods:
            n_iter = iterations
            failed = rng.random(n_iter) < failure_rate
            for ms in measures:
                if ms.orientation == "lower_better":
                    vals = rng.uniform(0.05, 0.35, size=n_iter)
                else:
                    vals = rng.uniform(0.4, 0.9, size=n_iter)
                cell = tuple(
                    None if failed[i] else float(vals[i]) for i in range(n_iter)
                )
                cells[(d.id, me, ms.id)] = cell
    return PerformanceTensor.build(datasets, methods, measures, cells)


def tensor_from_matrix(values, measure=IBRIER, datasets=None):
    """Single-iteration, failure-free tensor from an L x M value matrix."""
    values = np.asarray(values, dtype=float)
    L, M = values.shape
    if datasets is None:
        datasets = make_datasets(L, seed=7)
    methods = [f"m{j}" for j in range(M)]
    cells = {
        (datasets[i].id, methods[j], measure.id): (float(values[i, j]),)
        for i in range(L)
        for j in range(M)
    }
    return PerformanceTensor.build(datasets, methods, (measure,), cells)


def small_grid_config(defaults_measure="ibrier"):
    """2 filters x 2 measures x 4 imputations x 4 aggregations grid."""
    filters = (
        DatasetFilter(kind="all"),
        DatasetFilter(kind="median_split", characteristic="n", side="below"),
    )
    imputations = tuple(
        ImputationStrategy(kind=k)
        for k in ("threshold20", "weighted", "random_prediction", "mean_nonfailed")
    )
    aggregations = tuple(
        AggregationStrategy(kind=k) for k in ("mean", "median", "mean_rank", "best005")
    )
    defaults = Universe(
        filter=filters[0],
        measure=defaults_measure,
        imputation=imputations[0],
        aggregation=aggregations[0],
    )
    return MultiverseConfig(
        filters=filters,
        measures=("ibrier", "cindex"),
        imputations=imputations,
        aggregations=aggregations,
        defaults=defaults,
    )


@pytest.fixture
def two_measure_tensor():
    return make_tensor(n_datasets=6, n_methods=4, seed=3)
