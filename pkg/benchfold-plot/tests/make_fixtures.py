"""Regenerate the golden input fixtures from the analysis package.

Run from the repository root (benchfold must be installed):

    python benchfold-plot/tests/make_fixtures.py

The fixtures are committed; regeneration is only needed when the upstream
output formats change.
"""

import os
from dataclasses import replace

from benchfold import (
    UnfoldOptions,
    default_option_distances,
    fit,
    permutation_test,
    run_multiverse,
    scree,
    stepwise_optimize,
    stress_per_point,
)
from benchfold.io import (
    diagnostics_json_obj,
    stepwise_json_obj,
    unfolding_json_obj,
    write_outputs,
)

import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "..", "tests"))
from conftest import make_tensor, small_grid_config  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def main():
    tensor = make_tensor(n_datasets=6, n_methods=4, seed=4, failure_rate=0.15)
    config = small_grid_config()
    # trim to a 2x2x2x2 grid so the fixtures stay small
    config = replace(config, imputations=config.imputations[:2],
                     aggregations=config.aggregations[:2])

    table = run_multiverse(tensor, config)
    options = UnfoldOptions(dim=2, n_starts=2, seed=7, eps=1e-8, max_iter=600)
    solution = fit(table.ranks, options)

    perm = permutation_test(
        table.ranks,
        replace(options, n_starts=1, max_iter=200, eps=1e-6),
        n_perm=19, seed=5,
    )
    spp_rows, spp_cols = stress_per_point(solution)
    scree_map = scree(table.ranks, replace(options, n_starts=1, max_iter=200),
                      dims=[1, 2, 3])
    distances = default_option_distances(solution, table, config)
    trajectories = [stepwise_optimize(tensor, config, m) for m in tensor.methods]

    write_outputs(
        FIXTURES,
        table=table,
        unfolding=unfolding_json_obj(solution, table, options,
                                     defaults=config.defaults),
        diagnostics=diagnostics_json_obj(perm, spp_rows, spp_cols, table,
                                         scree_map),
        stepwise=stepwise_json_obj(trajectories),
        distances=distances,
    )
    print(f"fixtures written to {FIXTURES}")


if __name__ == "__main__":
    main()
