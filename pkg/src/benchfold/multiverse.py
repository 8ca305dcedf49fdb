"""Enumeration and evaluation of design/analysis choice combinations.

A *universe* fixes one option for each of the four choices: the data-set
filter, the performance measure, the imputation strategy, and the
aggregation strategy. The full grid of universes is evaluated to a table
of method rankings; the table feeds the unfolding and diagnostics stages.

Also implemented here: greedy step-wise optimization of a target method's
rank over the four choices, and seeded sampling of data-set prefix groups
for the unrestricted data-set-choice experiment.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import product

import numpy as np

from .aggregation import (
    AggregationStrategy,
    PerfMatrix,
    aggregate,
    aggregate_goodness,
)
from .imputation import ImputationStrategy, impute_cell
from .model import DatasetMeta, PerformanceTensor, Ranking

FILTER_ALL = "all"
MEDIAN_SPLIT = "median_split"
BELOW = "below"
AT_OR_ABOVE = "at_or_above"

CHARACTERISTICS = ("clin", "n", "n_eff", "p")
CHOICES = ("datasets", "measure", "imputation", "aggregation")

__all__ = [
    "FILTER_ALL",
    "MEDIAN_SPLIT",
    "BELOW",
    "AT_OR_ABOVE",
    "CHARACTERISTICS",
    "CHOICES",
    "DatasetFilter",
    "Universe",
    "MultiverseConfig",
    "RankingTable",
    "EmptyUniverseError",
    "apply_filter",
    "enumerate_universes",
    "evaluate_universe",
    "run_multiverse",
    "rank_distribution",
    "StepwiseStep",
    "option_label",
    "with_option",
    "StepwiseTrajectory",
    "stepwise_optimize",
    "sample_prefix_groups",
]


class EmptyUniverseError(ValueError):
    """A data-set filter left no data sets to evaluate."""


@dataclass(frozen=True)
class DatasetFilter:
    """Keep all data sets, or one side of a median split on a characteristic."""

    kind: str
    characteristic: str | None = None
    side: str | None = None

    def __post_init__(self) -> None:
        if self.kind == FILTER_ALL:
            if self.characteristic is not None or self.side is not None:
                raise ValueError("'all' filter carries no characteristic or side")
        elif self.kind == MEDIAN_SPLIT:
            if self.characteristic not in CHARACTERISTICS:
                raise ValueError(f"unknown characteristic {self.characteristic!r}")
            if self.side not in (BELOW, AT_OR_ABOVE):
                raise ValueError(f"unknown split side {self.side!r}")
        else:
            raise ValueError(f"unknown filter kind {self.kind!r}")

    def label(self) -> str:
        if self.kind == FILTER_ALL:
            return FILTER_ALL
        return f"{self.characteristic}_{self.side}"


@dataclass(frozen=True)
class Universe:
    """One full assignment of the four design/analysis choices."""

    filter: DatasetFilter
    measure: str
    imputation: ImputationStrategy
    aggregation: AggregationStrategy

    def key(self) -> tuple:
        """Stable identity used to join table rows with unfolding output."""
        return (
            self.filter.label(),
            self.measure,
            self.imputation.kind,
            self.aggregation.kind,
        )


@dataclass(frozen=True)
class MultiverseConfig:
    """The option grid plus the default universe and the step-wise order."""

    filters: tuple
    measures: tuple
    imputations: tuple
    aggregations: tuple
    defaults: Universe
    stepwise_order: tuple = CHOICES

    def __post_init__(self) -> None:
        object.__setattr__(self, "filters", tuple(self.filters))
        object.__setattr__(self, "measures", tuple(self.measures))
        object.__setattr__(self, "imputations", tuple(self.imputations))
        object.__setattr__(self, "aggregations", tuple(self.aggregations))
        object.__setattr__(self, "stepwise_order", tuple(self.stepwise_order))
        if sorted(self.stepwise_order) != sorted(CHOICES):
            raise ValueError(
                f"stepwise_order must be a permutation of {CHOICES}, "
                f"got {self.stepwise_order}"
            )
        d = self.defaults
        if d.filter not in self.filters:
            raise ValueError("default data-set filter is not among the options")
        if d.measure not in self.measures:
            raise ValueError("default measure is not among the options")
        if d.imputation not in self.imputations:
            raise ValueError("default imputation is not among the options")
        if d.aggregation not in self.aggregations:
            raise ValueError("default aggregation is not among the options")

    def options(self, choice: str):
        if choice == "datasets":
            return self.filters
        if choice == "measure":
            return self.measures
        if choice == "imputation":
            return self.imputations
        if choice == "aggregation":
            return self.aggregations
        raise ValueError(f"unknown choice {choice!r}")


@dataclass(frozen=True)
class RankingTable:
    """K universes by M methods, one mid-rank row per universe."""

    universes: tuple
    methods: tuple
    ranks: np.ndarray  # K x M

    def __post_init__(self) -> None:
        r = np.asarray(self.ranks, dtype=float)
        object.__setattr__(self, "ranks", r)
        if r.shape != (len(self.universes), len(self.methods)):
            raise ValueError("rank matrix shape does not match universes x methods")

    def row(self, universe: Universe) -> Ranking:
        k = self.universes.index(universe)
        return Ranking(ranks=dict(zip(self.methods, self.ranks[k].tolist())))

    def __len__(self) -> int:
        return len(self.universes)


def apply_filter(datasets, flt: DatasetFilter):
    """Apply a data-set filter; the median is taken over the full input list.

    The two sides of a median split partition the input: ``below`` keeps
    data sets strictly below the median of the chosen characteristic,
    ``at_or_above`` the rest. The result may be empty; downstream stages
    reject universes with no data sets.
    """
    datasets = list(datasets)
    if not datasets:
        raise ValueError("need at least one data set")
    if flt.kind == FILTER_ALL:
        return datasets
    med = float(np.median([d.characteristic(flt.characteristic) for d in datasets]))
    if flt.side == BELOW:
        return [d for d in datasets if d.characteristic(flt.characteristic) < med]
    return [d for d in datasets if d.characteristic(flt.characteristic) >= med]


def enumerate_universes(config: MultiverseConfig):
    """The full option grid in deterministic order.

    Filters vary slowest, then measures, imputations, and aggregations.
    """
    return [
        Universe(filter=f, measure=m, imputation=i, aggregation=a)
        for f, m, i, a in product(
            config.filters, config.measures, config.imputations, config.aggregations
        )
    ]


def build_perf_matrix(
    tensor: PerformanceTensor,
    datasets,
    measure_id: str,
    imputation: ImputationStrategy,
) -> PerfMatrix:
    """Impute every (data set, method) cell of one measure into an L x M matrix."""
    measure = tensor.measure(measure_id)
    values = np.empty((len(datasets), len(tensor.methods)), dtype=float)
    for i, d in enumerate(datasets):
        for j, m in enumerate(tensor.methods):
            values[i, j] = impute_cell(
                tensor.cell(d.id, m, measure_id), measure, imputation
            )
    return PerfMatrix(
        values=values,
        dataset_ids=tuple(d.id for d in datasets),
        method_ids=tuple(tensor.methods),
        measure=measure,
    )


def evaluate_universe(tensor: PerformanceTensor, universe: Universe) -> Ranking:
    """Filter, impute, aggregate: one universe down to one method ranking."""
    datasets = apply_filter(tensor.datasets, universe.filter)
    if not datasets:
        raise EmptyUniverseError(
            f"filter {universe.filter.label()!r} left no data sets"
        )
    matrix = build_perf_matrix(tensor, datasets, universe.measure, universe.imputation)
    return aggregate(matrix, universe.aggregation)


def run_multiverse(
    tensor: PerformanceTensor, config: MultiverseConfig, threads: int = 1
) -> RankingTable:
    """Evaluate every universe of the grid into a ranking table.

    Universes whose filter leaves no data sets are skipped with a warning.
    Rows always appear in enumeration order, independent of ``threads``.
    """
    universes = enumerate_universes(config)

    def _evaluate(u):
        try:
            return evaluate_universe(tensor, u)
        except EmptyUniverseError as err:
            warnings.warn(f"skipping universe {u.key()}: {err}")
            return None

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_evaluate, universes))
    else:
        results = [_evaluate(u) for u in universes]

    kept = [(u, r) for u, r in zip(universes, results) if r is not None]
    methods = tuple(tensor.methods)
    ranks = np.array([r.as_vector(methods) for _, r in kept], dtype=float)
    if ranks.size == 0:
        ranks = ranks.reshape(0, len(methods))
    return RankingTable(
        universes=tuple(u for u, _ in kept), methods=methods, ranks=ranks
    )


def rank_distribution(table: RankingTable) -> dict:
    """Exact per-method counts of achieved ranks, with min and max."""
    out = {}
    for j, m in enumerate(table.methods):
        col = table.ranks[:, j]
        values, counts = np.unique(col, return_counts=True)
        out[m] = {
            "counts": {float(v): int(c) for v, c in zip(values, counts)},
            "min": float(col.min()),
            "max": float(col.max()),
        }
    return out


@dataclass(frozen=True)
class StepwiseStep:
    choice: str
    option_label: str
    rank: float
    goodness: tuple
    improved: bool  # strict rank improvement over the incumbent state


@dataclass(frozen=True)
class StepwiseTrajectory:
    method: str
    start_universe: Universe
    start_rank: float
    steps: tuple
    final_universe: Universe
    final_rank: float


def option_label(choice: str, option) -> str:
    if choice == "datasets":
        return option.label()
    if choice == "measure":
        return option
    return option.kind


def with_option(universe: Universe, choice: str, option) -> Universe:
    field = {"datasets": "filter"}.get(choice, choice)
    return replace(universe, **{field: option})


def _rank_and_goodness(tensor, universe, method):
    datasets = apply_filter(tensor.datasets, universe.filter)
    if not datasets:
        raise EmptyUniverseError(
            f"filter {universe.filter.label()!r} left no data sets"
        )
    matrix = build_perf_matrix(
        tensor, datasets, universe.measure, universe.imputation
    )
    ranking = aggregate(matrix, universe.aggregation)
    goodness = aggregate_goodness(matrix, universe.aggregation)
    return ranking[method], goodness[method]


def stepwise_optimize(
    tensor: PerformanceTensor, config: MultiverseConfig, target_method: str
) -> StepwiseTrajectory:
    """Greedy per-choice optimization of one method's rank.

    Starting from the default universe, the choices are visited in
    ``config.stepwise_order``. At each step every option for the current
    choice is tried with the other choices held at their current state; the
    option with the smallest resulting rank wins, equal ranks are broken by
    the better aggregated performance, and remaining ties keep the
    incumbent option. Performance values are only commensurable between
    options that share measure and aggregation kind (an ibrier mean and a
    cindex mean, or a win count, live on different scales), so the
    performance tie-break applies exactly there; other rank ties fall back
    to the incumbent-first option order.

    A step with no strict rank improvement is recorded as such
    (``improved=False``); the trajectory never worsens the target's rank.
    """
    if target_method not in tensor.methods:
        raise ValueError(f"unknown method {target_method!r}")

    state = config.defaults
    start_rank, _ = _rank_and_goodness(tensor, state, target_method)
    current_rank = start_rank
    steps = []

    for choice in config.stepwise_order:
        incumbent = getattr(state, {"datasets": "filter"}.get(choice, choice))
        # Incumbent first so that full ties keep the current option.
        options = [incumbent] + [o for o in config.options(choice) if o != incumbent]
        best_option, best_rank, best_goodness = None, None, None
        best_scale = None
        for option in options:
            candidate = with_option(state, choice, option)
            try:
                rank, goodness = _rank_and_goodness(tensor, candidate, target_method)
            except EmptyUniverseError:
                continue
            scale = (candidate.measure, candidate.aggregation.kind)
            if (
                best_rank is None
                or rank < best_rank
                or (rank == best_rank and scale == best_scale
                    and goodness > best_goodness)
            ):
                best_option, best_rank, best_goodness = option, rank, goodness
                best_scale = scale
        state = with_option(state, choice, best_option)
        steps.append(
            StepwiseStep(
                choice=choice,
                option_label=option_label(choice, best_option),
                rank=best_rank,
                goodness=best_goodness,
                improved=best_rank < current_rank,
            )
        )
        current_rank = best_rank

    return StepwiseTrajectory(
        method=target_method,
        start_universe=config.defaults,
        start_rank=start_rank,
        steps=tuple(steps),
        final_universe=state,
        final_rank=current_rank,
    )


def sample_prefix_groups(datasets, n_perms: int, seed: int):
    """Deduplicated prefix groups from seeded data-set permutations.

    Each permutation contributes its prefixes of length 1 to L-1; groups are
    deduplicated as unordered sets (first occurrence kept) and the full set
    of L data sets is appended last. Per-permutation generators are derived
    from the seed, so output is identical across runs and independent of
    any execution schedule.
    """
    if n_perms < 1:
        raise ValueError("need at least one permutation")
    datasets = list(datasets)
    L = len(datasets)
    children = np.random.SeedSequence(seed).spawn(n_perms)
    seen = set()
    groups = []
    for child in children:
        rng = np.random.default_rng(child)
        order = rng.permutation(L)
        for length in range(1, L):
            idx = frozenset(order[:length].tolist())
            if idx not in seen:
                seen.add(idx)
                members = [datasets[i] for i in sorted(idx)]
                groups.append(tuple(members))
    groups.append(tuple(datasets))
    return groups
