"""Benchfold: how fragile is a benchmark ranking?

The package enumerates every combination of data-set subgroup, performance
measure, missing-value imputation rule, and aggregation rule; computes the
method ranking each combination produces; simulates step-wise optimization
of the choices; and fits a penalized-stress ordinal multidimensional
unfolding of the resulting rankings, with goodness-of-fit diagnostics.
"""

from .aggregation import (
    AggregationStrategy,
    PerfMatrix,
    aggregate,
    aggregate_goodness,
    rank_from_scores,
)
from .diagnostics import (
    DefaultDistance,
    PermutationTest,
    default_option_distances,
    permutation_test,
    scree,
    stress_per_point,
)
from .imputation import ImputationStrategy, failure_proportion, impute_cell
from .model import (
    DatasetMeta,
    MeasureSpec,
    PerformanceTensor,
    Ranking,
    validate_tensor,
)
from .multiverse import (
    DatasetFilter,
    EmptyUniverseError,
    MultiverseConfig,
    RankingTable,
    StepwiseStep,
    StepwiseTrajectory,
    Universe,
    apply_filter,
    build_perf_matrix,
    enumerate_universes,
    evaluate_universe,
    rank_distribution,
    run_multiverse,
    sample_prefix_groups,
    stepwise_optimize,
)
from .unfolding import (
    DegenerateDisparitiesError,
    UnfoldOptions,
    UnfoldingSolution,
    euclidean_distances,
    fit,
    monotone_regress,
    penalized_stress,
    smacof_step,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationStrategy",
    "DatasetFilter",
    "DatasetMeta",
    "DefaultDistance",
    "DegenerateDisparitiesError",
    "EmptyUniverseError",
    "ImputationStrategy",
    "MeasureSpec",
    "MultiverseConfig",
    "PerfMatrix",
    "PerformanceTensor",
    "PermutationTest",
    "Ranking",
    "RankingTable",
    "StepwiseStep",
    "StepwiseTrajectory",
    "UnfoldOptions",
    "UnfoldingSolution",
    "Universe",
    "aggregate",
    "aggregate_goodness",
    "apply_filter",
    "build_perf_matrix",
    "default_option_distances",
    "enumerate_universes",
    "euclidean_distances",
    "evaluate_universe",
    "failure_proportion",
    "fit",
    "impute_cell",
    "monotone_regress",
    "penalized_stress",
    "permutation_test",
    "rank_distribution",
    "rank_from_scores",
    "run_multiverse",
    "sample_prefix_groups",
    "scree",
    "smacof_step",
    "stepwise_optimize",
    "stress_per_point",
    "validate_tensor",
]
