"""Collapse a per-dataset performance matrix into one method ranking.

The four strategies: column ``mean``, column ``median``, ``mean_rank``
(average of per-dataset ranks), and ``best005`` (number of data sets where
a method performs best, tie-broken by the number of data sets where it
lands within a relative environment of the row best).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .model import MeasureSpec, Ranking

MEAN = "mean"
MEDIAN = "median"
MEAN_RANK = "mean_rank"
BEST005 = "best005"

STRATEGY_KINDS = (MEAN, MEDIAN, MEAN_RANK, BEST005)

SMALLER = "smaller"
LARGER = "larger"

__all__ = [
    "MEAN",
    "MEDIAN",
    "MEAN_RANK",
    "BEST005",
    "STRATEGY_KINDS",
    "SMALLER",
    "LARGER",
    "AggregationStrategy",
    "PerfMatrix",
    "rank_from_scores",
    "aggregate",
    "aggregate_goodness",
]


@dataclass(frozen=True)
class AggregationStrategy:
    kind: str
    environment: float = 0.05  # only read by best005

    def __post_init__(self) -> None:
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown aggregation strategy {self.kind!r}")
        if not self.environment > 0.0:
            raise ValueError(f"environment must be positive, got {self.environment}")


@dataclass(frozen=True)
class PerfMatrix:
    """L x M imputed performance values with row/column identities."""

    values: np.ndarray
    dataset_ids: tuple
    method_ids: tuple
    measure: MeasureSpec

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.ndim != 2 or v.shape != (len(self.dataset_ids), len(self.method_ids)):
            raise ValueError(
                f"values shape {v.shape} does not match "
                f"{len(self.dataset_ids)} datasets x {len(self.method_ids)} methods"
            )
        if v.shape[0] < 1 or v.shape[1] < 2:
            raise ValueError("need at least 1 dataset and 2 methods")
        if not np.all(np.isfinite(v)):
            raise ValueError("performance matrix contains non-finite entries")


def rank_from_scores(scores: dict, better: str) -> Ranking:
    """Mid-rank vector from a score map; the best score gets rank 1.

    ``better`` is ``"smaller"`` or ``"larger"`` and states which end of the
    score scale is preferable. Tied scores receive their average rank.
    """
    if len(scores) < 2:
        raise ValueError("need at least two methods to rank")
    if better not in (SMALLER, LARGER):
        raise ValueError(f"better must be 'smaller' or 'larger', got {better!r}")
    methods = list(scores)
    vals = np.array([scores[m] for m in methods], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise ValueError("scores contain non-finite values")
    if better == LARGER:
        vals = -vals
    ranks = rankdata(vals, method="average")
    return Ranking(ranks=dict(zip(methods, ranks.tolist())))


def _rank_lexicographic(methods, keys) -> Ranking:
    """Mid-ranks from goodness tuples, larger tuples ranked better."""
    order = {t: i for i, t in enumerate(sorted(set(keys), reverse=True))}
    codes = np.array([order[t] for t in keys], dtype=float)
    ranks = rankdata(codes, method="average")
    return Ranking(ranks=dict(zip(methods, ranks.tolist())))


def _best005_counts(matrix: PerfMatrix, environment: float):
    """Per-method win counts and environment-hit counts across data sets."""
    v = matrix.values
    lower = matrix.measure.lower_better
    best = v.min(axis=1) if lower else v.max(axis=1)
    wins = (v == best[:, None]).sum(axis=0)

    env_hits = np.zeros(v.shape[1], dtype=int)
    for row, b in zip(v, best):
        if b == 0.0:
            # The relative criterion degenerates; only exact equality counts.
            env_hits += row == 0.0
        else:
            env_hits += np.abs(row - b) / b < environment
    return wins, env_hits


def aggregate_goodness(matrix: PerfMatrix, strategy: AggregationStrategy) -> dict:
    """Per-method comparable goodness tuples under a strategy (larger wins).

    Scalar strategies yield an oriented score in the first slot; best005
    yields (win count, environment count). These tuples order methods the
    same way :func:`aggregate` ranks them, and give the step-wise optimizer
    a performance tie-breaker.
    """
    v = matrix.values
    methods = matrix.method_ids
    lower = matrix.measure.lower_better

    if strategy.kind == MEAN:
        scores = v.mean(axis=0)
        oriented = -scores if lower else scores
    elif strategy.kind == MEDIAN:
        scores = np.median(v, axis=0)
        oriented = -scores if lower else scores
    elif strategy.kind == MEAN_RANK:
        row_ranks = np.vstack(
            [rankdata(row if lower else -row, method="average") for row in v]
        )
        oriented = -row_ranks.mean(axis=0)
    else:
        wins, env_hits = _best005_counts(matrix, strategy.environment)
        return {m: (float(w), float(e)) for m, w, e in zip(methods, wins, env_hits)}

    return {m: (float(s), 0.0) for m, s in zip(methods, oriented)}


def aggregate(matrix: PerfMatrix, strategy: AggregationStrategy) -> Ranking:
    """Rank methods by aggregating the performance matrix over data sets."""
    goodness = aggregate_goodness(matrix, strategy)
    methods = matrix.method_ids
    return _rank_lexicographic(methods, [goodness[m] for m in methods])
