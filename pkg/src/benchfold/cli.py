"""Command-line surface tying the pipeline together.

Subcommands: validate, multiverse, stepwise, unfold, diagnose,
sample-datasets, all. Exit status 0 on success, 1 on data or configuration
errors, 2 on internal errors.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from dataclasses import replace

from . import io as bio
from .diagnostics import default_option_distances, permutation_test, scree, stress_per_point
from .model import validate_tensor
from .multiverse import (
    CHOICES,
    apply_filter,
    build_perf_matrix,
    run_multiverse,
    sample_prefix_groups,
    stepwise_optimize,
)
from .aggregation import aggregate
from .multiverse import RankingTable
from .unfolding import fit

__all__ = ["cli", "main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 1
        raise _UsageError(message)


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=False, help="study configuration (JSON)")
    common.add_argument("--results", required=False, help="long-format results CSV")
    common.add_argument("--datasets", required=False, help="data-set metadata CSV")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--threads", type=int, default=1)

    parser = _Parser(prog="benchfold", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common])
    sub.add_parser("multiverse", parents=[common])

    p = sub.add_parser("stepwise", parents=[common])
    p.add_argument("--method", required=True)
    p.add_argument("--order", help="comma-separated choice order, e.g. "
                                   "imputation,aggregation,measure,datasets")

    p = sub.add_parser("unfold", parents=[common])
    p.add_argument("--dim", type=int)

    p = sub.add_parser("diagnose", parents=[common])
    p.add_argument("--permutations", type=int, default=99)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("sample-datasets", parents=[common])
    p.add_argument("--permutations", type=int, required=True)
    p.add_argument("--seed", type=int)

    sub.add_parser("all", parents=[common])
    return parser


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise bio.ConfigError(f"--{name} is required for this command")


def _load_study(args):
    _require(args, "config", "results", "datasets")
    config = bio.parse_config(args.config)
    datasets = bio.parse_datasets(args.datasets)
    tensor = bio.parse_results(args.results, datasets, list(config.measures))
    return config, tensor


def _validate(args) -> int:
    config, tensor = _load_study(args)
    violations = validate_tensor(tensor)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return 1
    print(
        f"ok: {len(tensor.datasets)} datasets x {len(tensor.methods)} methods "
        f"x {len(tensor.measures)} measures"
    )
    return 0


def _multiverse(args) -> int:
    config, tensor = _load_study(args)
    table = run_multiverse(tensor, config.multiverse, threads=args.threads)
    bio.write_outputs(args.out, table=table)
    print(f"wrote {len(table)} rankings to {args.out}/rankings.csv")
    return 0


def _stepwise(args) -> int:
    config, tensor = _load_study(args)
    mv = config.multiverse
    if args.order:
        order = tuple(args.order.split(","))
        mv = replace(mv, stepwise_order=order)
    trajectory = stepwise_optimize(tensor, mv, args.method)
    bio.write_outputs(args.out, stepwise=bio.stepwise_json_obj([trajectory]))
    print(
        f"{args.method}: rank {trajectory.start_rank:g} -> "
        f"{trajectory.final_rank:g} in {len(trajectory.steps)} steps"
    )
    return 0


def _fit_table(tensor, config, args, dim=None):
    table = run_multiverse(tensor, config.multiverse, threads=args.threads)
    options = config.unfold
    if dim is not None:
        options = replace(options, dim=dim)
    solution = fit(table.ranks, options)
    return table, options, solution


def _unfold(args) -> int:
    config, tensor = _load_study(args)
    table, options, solution = _fit_table(tensor, config, args, dim=args.dim)
    bio.write_outputs(
        args.out,
        table=table,
        unfolding=bio.unfolding_json_obj(
            solution, table, options, defaults=config.multiverse.defaults
        ),
    )
    print(
        f"unfolding: dim={options.dim} penalized stress "
        f"{solution.stress_penalized:.6g} ({solution.iterations} iterations)"
    )
    return 0


def _reduced(options):
    # Permutation and scree refits run on a reduced budget; the permutation
    # test applies it to the observed table as well, so observed and null
    # stresses stay exchangeable.
    return replace(options, n_starts=1,
                   max_iter=min(options.max_iter, 300),
                   eps=max(options.eps, 1e-6))


def _diagnose(args) -> int:
    config, tensor = _load_study(args)
    table, options, solution = _fit_table(tensor, config, args)
    seed = bio.resolve_seed(args.seed, config.unfold.seed)

    perm = permutation_test(
        table.ranks, _reduced(options), n_perm=args.permutations, seed=seed
    )
    spp_rows, spp_cols = stress_per_point(solution)
    m = len(table.methods)
    dims = sorted(set(range(1, min(m - 1, 6) + 1)) | {options.dim})
    scree_map = scree(table.ranks, replace(_reduced(options), n_starts=2), dims)
    distances = default_option_distances(solution, table, config.multiverse)

    bio.write_outputs(
        args.out,
        table=table,
        unfolding=bio.unfolding_json_obj(
            solution, table, options, defaults=config.multiverse.defaults
        ),
        diagnostics=bio.diagnostics_json_obj(
            perm, spp_rows, spp_cols, table, scree_map
        ),
        distances=distances,
    )
    print(f"permutation test: p = {perm.p_value:.6g} (n_perm={perm.n_perm})")
    return 0


def _sample_datasets(args) -> int:
    config, tensor = _load_study(args)
    seed = bio.resolve_seed(args.seed, config.sampling.seed)
    groups = sample_prefix_groups(tensor.datasets, args.permutations, seed)

    defaults = config.multiverse.defaults
    group_lines = ["group_id,size,dataset_ids"]
    rank_lines = ["group_id," + ",".join(tensor.methods)]
    for gid, group in enumerate(groups):
        ids = ";".join(d.id for d in group)
        group_lines.append(f"g{gid:04d},{len(group)},{ids}")
        matrix = build_perf_matrix(
            tensor, list(group), defaults.measure, defaults.imputation
        )
        ranking = aggregate(matrix, defaults.aggregation)
        row = ",".join(bio.fmt_float(ranking[m]) for m in tensor.methods)
        rank_lines.append(f"g{gid:04d},{row}")

    bio.write_outputs(
        args.out,
        extra_files={
            "dataset_groups.csv": "\n".join(group_lines) + "\n",
            "sampled_rankings.csv": "\n".join(rank_lines) + "\n",
        },
    )
    print(f"sampled {len(groups)} data-set groups (seed={seed})")
    return 0


def _all(args) -> int:
    config, tensor = _load_study(args)
    violations = validate_tensor(tensor)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return 1

    table, options, solution = _fit_table(tensor, config, args)
    trajectories = [
        stepwise_optimize(tensor, config.multiverse, m) for m in tensor.methods
    ]
    seed = bio.resolve_seed(None, config.unfold.seed)
    perm = permutation_test(
        table.ranks, _reduced(options), n_perm=99, seed=seed
    )
    spp_rows, spp_cols = stress_per_point(solution)
    m = len(table.methods)
    dims = sorted(set(range(1, min(m - 1, 6) + 1)) | {options.dim})
    scree_map = scree(table.ranks, replace(_reduced(options), n_starts=2), dims)
    distances = default_option_distances(solution, table, config.multiverse)

    bio.write_outputs(
        args.out,
        table=table,
        unfolding=bio.unfolding_json_obj(
            solution, table, options, defaults=config.multiverse.defaults
        ),
        diagnostics=bio.diagnostics_json_obj(
            perm, spp_rows, spp_cols, table, scree_map
        ),
        stepwise=bio.stepwise_json_obj(trajectories),
        distances=distances,
    )
    print(f"full pipeline written to {args.out}")
    return 0


_COMMANDS = {
    "validate": _validate,
    "multiverse": _multiverse,
    "stepwise": _stepwise,
    "unfold": _unfold,
    "diagnose": _diagnose,
    "sample-datasets": _sample_datasets,
    "all": _all,
}


def cli(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1

    try:
        return _COMMANDS[args.command](args)
    except (bio.ParseError, bio.ConfigError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


def main() -> None:
    sys.exit(cli(sys.argv[1:]))
