"""Replacement of failed resampling iterations by a single per-cell value.

Four strategies are supported:

* ``threshold20``: mean of the non-failed iterations while the failure
  proportion stays below the threshold (default 20%), the random-prediction
  value once it reaches it.
* ``weighted``: shrinks the non-failed mean toward the random-prediction
  value in proportion to the failure rate, clipping fluctuations past the
  random value first.
* ``random_prediction``: any failure at all puts the cell at the
  random-prediction value.
* ``mean_nonfailed``: mean of the non-failed iterations regardless of the
  failure rate.

A cell without failures is never altered by any strategy; every strategy
then returns the plain iteration mean. All functions here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import MeasureSpec

THRESHOLD20 = "threshold20"
WEIGHTED = "weighted"
RANDOM_PREDICTION = "random_prediction"
MEAN_NONFAILED = "mean_nonfailed"

STRATEGY_KINDS = (THRESHOLD20, WEIGHTED, RANDOM_PREDICTION, MEAN_NONFAILED)

__all__ = [
    "THRESHOLD20",
    "WEIGHTED",
    "RANDOM_PREDICTION",
    "MEAN_NONFAILED",
    "STRATEGY_KINDS",
    "ImputationStrategy",
    "failure_proportion",
    "impute_cell",
]


@dataclass(frozen=True)
class ImputationStrategy:
    kind: str
    threshold: float = 0.2  # only read by threshold20

    def __post_init__(self) -> None:
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(f"unknown imputation strategy {self.kind!r}")
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError(f"threshold must lie in (0, 1], got {self.threshold}")


def failure_proportion(cell) -> float:
    """Proportion of failed (absent) iteration slots in a cell."""
    if len(cell) == 0:
        raise ValueError("cell has no iteration slots")
    failed = sum(1 for v in cell if v is None)
    return failed / len(cell)


def _present_mean(cell) -> float:
    # Summation in iteration order keeps outputs bitwise reproducible.
    total = 0.0
    count = 0
    for v in cell:
        if v is not None:
            total += v
            count += 1
    return total / count


def impute_cell(cell, measure: MeasureSpec, strategy: ImputationStrategy) -> float:
    """Collapse one iteration cell to a single performance value.

    ``cell`` is a sequence of per-iteration values with ``None`` marking a
    failed iteration. The result always lies in the closed interval between
    the non-failed mean and the measure's random-prediction value, and
    equals the random value when every iteration failed.
    """
    if len(cell) == 0:
        raise ValueError("cell has no iteration slots")
    r = failure_proportion(cell)
    random_value = measure.random_value

    if r == 1.0:
        return random_value
    mean = _present_mean(cell)
    if r == 0.0:
        return mean

    if strategy.kind == MEAN_NONFAILED:
        return mean
    if strategy.kind == RANDOM_PREDICTION:
        return random_value
    if strategy.kind == THRESHOLD20:
        return mean if r < strategy.threshold else random_value

    # weighted: pull the mean toward the random value as failures grow;
    # fluctuations past the random value are not rewarded.
    if measure.lower_better:
        margin = random_value - mean
    else:
        margin = mean - random_value
    if margin < 0.0:
        margin = 0.0
    shrunk = margin * (1.0 - r)
    if measure.lower_better:
        return random_value - shrunk
    return random_value + shrunk
