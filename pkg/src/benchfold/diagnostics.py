"""Goodness-of-fit and choice-impact diagnostics for unfolding solutions.

Covers the permutation test against randomly permuted dissimilarities,
stress-per-point shares, scree curves over embedding dimensions, and the
ideal-point distances between default and alternative options.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .multiverse import MultiverseConfig, RankingTable, option_label, with_option
from .unfolding import UnfoldOptions, UnfoldingSolution, fit

WITHIN_ROW = "within_row"
GLOBAL = "global"

__all__ = [
    "WITHIN_ROW",
    "GLOBAL",
    "PermutationTest",
    "DefaultDistance",
    "permutation_test",
    "stress_per_point",
    "scree",
    "default_option_distances",
]


@dataclass(frozen=True)
class PermutationTest:
    p_value: float
    n_perm: int
    scheme: str
    observed_stress: float
    permuted_stress: tuple


def permutation_test(
    delta,
    options: UnfoldOptions,
    n_perm: int,
    seed: int,
    scheme: str = WITHIN_ROW,
    perm_options: UnfoldOptions | None = None,
) -> PermutationTest:
    """Permutation p-value for the hypothesis of no preference structure.

    The observed table is refit with ``options``; each of ``n_perm`` seeded
    permutations of the dissimilarities is refit with ``perm_options``
    (defaults to ``options``; a reduced multistart budget is acceptable
    there). The p-value uses the add-one convention, so it is a valid
    finite-sample p-value. Deterministic given (seed, n_perm).
    """
    if n_perm < 19:
        raise ValueError("need at least 19 permutations for a meaningful p-value")
    if scheme not in (WITHIN_ROW, GLOBAL):
        raise ValueError(f"unknown permutation scheme {scheme!r}")
    delta = np.asarray(delta, dtype=float)
    perm_options = perm_options or options

    observed = fit(delta, options).stress_penalized

    children = np.random.SeedSequence(seed).spawn(n_perm)
    permuted = []
    for child in children:
        rng = np.random.default_rng(child)
        if scheme == WITHIN_ROW:
            shuffled = np.vstack([rng.permutation(row) for row in delta])
        else:
            shuffled = rng.permutation(delta.ravel()).reshape(delta.shape)
        permuted.append(fit(shuffled, perm_options).stress_penalized)

    hits = sum(1 for s in permuted if s <= observed)
    p = (1 + hits) / (n_perm + 1)
    return PermutationTest(
        p_value=p,
        n_perm=n_perm,
        scheme=scheme,
        observed_stress=observed,
        permuted_stress=tuple(permuted),
    )


def stress_per_point(solution: UnfoldingSolution, weights=None):
    """Percent shares of the total squared residual per row and per column.

    With a perfect fit (zero total residual) every point is assigned the
    uniform share, keeping both sides summing to 100.
    """
    resid = (solution.disparities - solution.distances) ** 2
    if weights is not None:
        resid = np.asarray(weights, dtype=float) * resid
    total = resid.sum()
    K, M = resid.shape
    if total == 0.0:
        return np.full(K, 100.0 / K), np.full(M, 100.0 / M)
    rows = 100.0 * resid.sum(axis=1) / total
    cols = 100.0 * resid.sum(axis=0) / total
    return rows, cols


def scree(delta, options: UnfoldOptions, dims) -> dict:
    """Penalized stress of independent fits across embedding dimensions.

    All fits share the seed policy of ``options``. Stress should fall
    weakly with dimension; a rise beyond 5% relative points at an
    under-converged fit and is surfaced as a warning, not hidden.
    """
    out = {}
    for dim in dims:
        out[int(dim)] = fit(delta, replace(options, dim=int(dim))).stress_penalized
    sorted_dims = sorted(out)
    for lo, hi in zip(sorted_dims, sorted_dims[1:]):
        if out[hi] > out[lo] * 1.05 and out[hi] - out[lo] > 1e-8:
            warnings.warn(
                f"penalized stress rose from dim {lo} ({out[lo]:.6g}) to "
                f"dim {hi} ({out[hi]:.6g}); consider more starts"
            )
    return out


@dataclass(frozen=True)
class DefaultDistance:
    choice: str
    option_label: str  # the alternative option
    context_key: tuple  # universe key of the default-side (anchor) row
    distance: float


def default_option_distances(
    solution: UnfoldingSolution, table: RankingTable, config: MultiverseConfig
):
    """Ideal-point distances from default-option rows to their alternatives.

    For every universe that uses the default option of one choice, the
    distance to each universe differing only in that choice is emitted,
    labelled by (choice, alternative option). Solution rows must align with
    ``table.universes``; a context whose default-side row is missing while
    an alternative row exists raises, since the pair cannot be formed.
    """
    index = {u: k for k, u in enumerate(table.universes)}
    if config.defaults not in index:
        raise ValueError("default universe is missing from the ranking table")

    out = []
    present = set(index)
    for choice in ("datasets", "measure", "imputation", "aggregation"):
        default_opt = getattr(
            config.defaults, {"datasets": "filter"}.get(choice, choice)
        )
        for u in table.universes:
            if getattr(u, {"datasets": "filter"}.get(choice, choice)) != default_opt:
                continue
            for option in config.options(choice):
                if option == default_opt:
                    continue
                alt = with_option(u, choice, option)
                if alt not in present:
                    continue
                dist = float(
                    np.linalg.norm(solution.Z1[index[u]] - solution.Z1[index[alt]])
                )
                out.append(
                    DefaultDistance(
                        choice=choice,
                        option_label=option_label(choice, option),
                        context_key=u.key(),
                        distance=dist,
                    )
                )
        # A missing anchor with surviving alternatives cannot be paired.
        for u in table.universes:
            if getattr(u, {"datasets": "filter"}.get(choice, choice)) == default_opt:
                continue
            anchor = with_option(u, choice, default_opt)
            if anchor not in present:
                raise ValueError(
                    f"default-side universe {anchor.key()} missing for "
                    f"alternative {u.key()}"
                )
    return out
