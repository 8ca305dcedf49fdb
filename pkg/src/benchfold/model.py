"""Domain types for benchmark results: measures, data sets, the performance
tensor, and method rankings.

All types are immutable after construction and safe to share across threads.
Nothing in this module computes performance values; it only holds and
validates results produced elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

LOWER_BETTER = "lower_better"
HIGHER_BETTER = "higher_better"

__all__ = [
    "LOWER_BETTER",
    "HIGHER_BETTER",
    "MeasureSpec",
    "DatasetMeta",
    "PerformanceTensor",
    "Ranking",
    "validate_tensor",
]


@dataclass(frozen=True)
class MeasureSpec:
    """A quantitative performance measure and its reference values.

    ``random_value`` is the value a random prediction attains (0.25 for
    ibrier, 0.5 for cindex); ``best_value`` is the ideal value (0 and 1
    respectively).
    """

    id: str
    orientation: str  # LOWER_BETTER or HIGHER_BETTER
    random_value: float
    best_value: float

    def __post_init__(self) -> None:
        if self.orientation not in (LOWER_BETTER, HIGHER_BETTER):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if self.orientation == LOWER_BETTER and not self.best_value < self.random_value:
            raise ValueError(
                f"measure {self.id!r}: best_value must be below random_value "
                f"for a lower-is-better measure"
            )
        if self.orientation == HIGHER_BETTER and not self.best_value > self.random_value:
            raise ValueError(
                f"measure {self.id!r}: best_value must exceed random_value "
                f"for a higher-is-better measure"
            )

    @property
    def lower_better(self) -> bool:
        return self.orientation == LOWER_BETTER


@dataclass(frozen=True)
class DatasetMeta:
    """Metadata of one benchmark data set.

    clin: number of clinical variables; n: observations; n_eff: effective
    (event) cases; p: number of variables.
    """

    id: str
    clin: int
    n: int
    n_eff: int
    p: int

    def __post_init__(self) -> None:
        if self.clin < 0:
            raise ValueError(f"dataset {self.id!r}: clin must be nonnegative")
        if self.n <= 0:
            raise ValueError(f"dataset {self.id!r}: n must be positive")
        if self.n_eff < 0:
            raise ValueError(f"dataset {self.id!r}: n_eff must be nonnegative")
        if self.p <= 0:
            raise ValueError(f"dataset {self.id!r}: p must be positive")

    def characteristic(self, name: str) -> int:
        """Look up one of the split characteristics (clin, n, n_eff, p)."""
        if name not in ("clin", "n", "n_eff", "p"):
            raise ValueError(f"unknown data set characteristic {name!r}")
        return getattr(self, name)


# One resampling cell: a value per iteration, None marking a failed iteration.
Cell = tuple  # tuple[float | None, ...]


@dataclass(frozen=True)
class PerformanceTensor:
    """Iteration-level performance values per (data set, method, measure).

    ``cells`` maps (dataset_id, method_id, measure_id) to a tuple with one
    slot per resampling iteration; a ``None`` slot is a failed iteration.
    Failed iterations are always explicit slots, never sentinel numbers,
    so the failure proportion of a cell is exact.
    """

    datasets: tuple[DatasetMeta, ...]
    methods: tuple[str, ...]
    measures: tuple[MeasureSpec, ...]
    cells: dict = field(hash=False)

    @classmethod
    def build(cls, datasets, methods, measures, cells) -> "PerformanceTensor":
        """Normalize container types; cell sequences become tuples."""
        return cls(
            datasets=tuple(datasets),
            methods=tuple(methods),
            measures=tuple(measures),
            cells={key: tuple(vals) for key, vals in cells.items()},
        )

    def cell(self, dataset_id: str, method_id: str, measure_id: str) -> Cell:
        return self.cells[(dataset_id, method_id, measure_id)]

    def measure(self, measure_id: str) -> MeasureSpec:
        for m in self.measures:
            if m.id == measure_id:
                return m
        raise KeyError(f"unknown measure {measure_id!r}")

    @property
    def dataset_ids(self) -> tuple[str, ...]:
        return tuple(d.id for d in self.datasets)


@dataclass(frozen=True)
class Ranking:
    """Mid-rank vector over methods; rank 1 is the best performing method."""

    ranks: dict = field(hash=False)

    def __post_init__(self) -> None:
        m = len(self.ranks)
        if m == 0:
            raise ValueError("ranking must cover at least one method")
        total = sum(self.ranks.values())
        expected = m * (m + 1) / 2.0
        if not math.isclose(total, expected, rel_tol=0.0, abs_tol=1e-9 * m * m):
            raise ValueError(
                f"ranks sum to {total}, expected {expected} for {m} methods"
            )

    def __getitem__(self, method_id: str) -> float:
        return self.ranks[method_id]

    @property
    def methods(self) -> tuple[str, ...]:
        return tuple(self.ranks)

    def as_vector(self, methods) -> list:
        return [self.ranks[m] for m in methods]


def _unique_violations(label: str, ids) -> list:
    seen = set()
    out = []
    for i in ids:
        if i in seen:
            out.append(f"duplicate {label} id {i!r}")
        seen.add(i)
    return out


def validate_tensor(tensor: PerformanceTensor) -> list:
    """Check every structural invariant of a performance tensor.

    Returns a list of human-readable violations (empty when the tensor is
    well formed). Violations are data, not failures: the function never
    raises on bad content. Idempotent and side-effect free; a tensor that
    validates cleanly is accepted by every downstream operation.
    """
    violations: list = []

    violations += _unique_violations("dataset", [d.id for d in tensor.datasets])
    violations += _unique_violations("method", tensor.methods)
    violations += _unique_violations("measure", [m.id for m in tensor.measures])

    for d in tensor.datasets:
        if d.n_eff > d.n:
            violations.append(f"dataset {d.id!r}: n_eff exceeds n ({d.n_eff} > {d.n})")

    dataset_ids = set(d.id for d in tensor.datasets)
    method_ids = set(tensor.methods)
    measure_ids = set(m.id for m in tensor.measures)
    measures_by_id = {m.id: m for m in tensor.measures}

    for key, cell in tensor.cells.items():
        ds, me, ms = key
        if ds not in dataset_ids or me not in method_ids or ms not in measure_ids:
            violations.append(f"cell {key!r} references unknown ids")
            continue
        if len(cell) < 1:
            violations.append(f"cell {key!r} has no iteration slots")
        spec = measures_by_id[ms]
        if spec.lower_better and spec.best_value == 0:
            for i, v in enumerate(cell):
                if v is not None and v < 0:
                    violations.append(
                        f"cell {key!r} iteration {i}: negative value {v} for "
                        f"measure {ms!r}"
                    )

    # Every (dataset, method, measure) triple must be present, and iteration
    # counts must agree across measures for a fixed (dataset, method) pair.
    for d in tensor.datasets:
        for me in tensor.methods:
            counts = {}
            for m in tensor.measures:
                key = (d.id, me, m.id)
                if key not in tensor.cells:
                    violations.append(f"missing cell {key!r}")
                else:
                    counts[m.id] = len(tensor.cells[key])
            if len(set(counts.values())) > 1:
                detail = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
                violations.append(
                    f"iteration count mismatch for dataset {d.id!r}, "
                    f"method {me!r}: {detail}"
                )

    return violations
