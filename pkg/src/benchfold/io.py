"""File formats and deterministic serialization.

Results arrive as a long-format CSV (one line per resampling iteration, an
empty value marking a failed iteration), data-set metadata as a small CSV,
and the study configuration as JSON. Outputs are written with a fixed
float format (17 significant digits) and fixed key order, so identical
inputs produce byte-identical files. Schemas are documented in
``docs/formats.md``.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass

import numpy as np

from .aggregation import AggregationStrategy
from .aggregation import STRATEGY_KINDS as AGGREGATION_KINDS
from .diagnostics import PermutationTest
from .imputation import STRATEGY_KINDS as IMPUTATION_KINDS
from .imputation import ImputationStrategy
from .model import DatasetMeta, MeasureSpec, PerformanceTensor
from .multiverse import (
    AT_OR_ABOVE,
    BELOW,
    CHARACTERISTICS,
    CHOICES,
    FILTER_ALL,
    MEDIAN_SPLIT,
    DatasetFilter,
    MultiverseConfig,
    RankingTable,
    Universe,
)
from .unfolding import UnfoldOptions, UnfoldingSolution

RESULTS_HEADER = "dataset_id,method_id,measure_id,iteration,value"
DATASETS_HEADER = "id,clin,n,n_eff,p"

ENV_SEED = "BENCHFOLD_SEED"

__all__ = [
    "ParseError",
    "ConfigError",
    "SamplingConfig",
    "StudyConfig",
    "parse_datasets",
    "parse_results",
    "write_results",
    "parse_config",
    "filter_from_label",
    "write_outputs",
    "fmt_float",
    "json_dumps",
    "resolve_seed",
]


class ParseError(ValueError):
    """A data file violated its schema; the message names file and line."""


class ConfigError(ValueError):
    """The configuration violated its schema; the message names the field."""


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# deterministic JSON


def json_dumps(obj, indent: int = 0) -> str:
    """JSON text with a fixed float format and insertion-ordered keys."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  {json_dumps(str(k))}: {json_dumps(v, indent + 1).lstrip()}'
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}  {json_dumps(v, indent + 1).lstrip()}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
        return f'"{out}"'
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# input files


def _read_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def parse_datasets(path) -> list:
    """Read data-set metadata (id, clin, n, n_eff, p) from CSV."""
    lines = _read_lines(path)
    if not lines or lines[0] != DATASETS_HEADER:
        raise ParseError(f"{path}:1: expected header {DATASETS_HEADER!r}")
    out = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise ParseError(f"{path}:{ln}: expected 5 fields, got {len(parts)}")
        try:
            meta = DatasetMeta(
                id=parts[0],
                clin=int(parts[1]),
                n=int(parts[2]),
                n_eff=int(parts[3]),
                p=int(parts[4]),
            )
        except ValueError as err:
            raise ParseError(f"{path}:{ln}: {err}") from err
        out.append(meta)
    if not out:
        raise ParseError(f"{path}: no data sets")
    return out


def parse_results(path, datasets, measures) -> PerformanceTensor:
    """Read iteration-level results from long-format CSV into a tensor.

    An empty ``value`` field marks a failed iteration. Iterations must be
    0-based and contiguous within each (dataset, method, measure) cell, and
    iteration counts must agree across measures of one (dataset, method)
    pair; violations raise :class:`ParseError` with the offending line.
    """
    lines = _read_lines(path)
    if not lines or lines[0] != RESULTS_HEADER:
        raise ParseError(f"{path}:1: expected header {RESULTS_HEADER!r}")

    dataset_ids = {d.id for d in datasets}
    measure_ids = {m.id for m in measures}
    slots: dict = {}
    last_line: dict = {}
    methods: list = []
    seen_methods = set()

    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 5:
            raise ParseError(f"{path}:{ln}: expected 5 fields, got {len(parts)}")
        ds, me, ms, it_s, val_s = parts
        if ds not in dataset_ids:
            raise ParseError(f"{path}:{ln}: unknown dataset id {ds!r}")
        if ms not in measure_ids:
            raise ParseError(f"{path}:{ln}: unknown measure id {ms!r}")
        try:
            it = int(it_s)
        except ValueError:
            raise ParseError(f"{path}:{ln}: iteration {it_s!r} is not an integer")
        if it < 0:
            raise ParseError(f"{path}:{ln}: negative iteration {it}")
        if val_s == "":
            value = None
        else:
            try:
                value = float(val_s)
            except ValueError:
                raise ParseError(f"{path}:{ln}: value {val_s!r} is not numeric")
        key = (ds, me, ms)
        cell = slots.setdefault(key, {})
        if it in cell:
            raise ParseError(
                f"{path}:{ln}: duplicate key ({ds}, {me}, {ms}, iteration {it})"
            )
        cell[it] = value
        last_line[key] = ln
        if me not in seen_methods:
            seen_methods.add(me)
            methods.append(me)

    cells = {}
    for key, cell in slots.items():
        n_iter = len(cell)
        if sorted(cell) != list(range(n_iter)):
            raise ParseError(
                f"{path}:{last_line[key]}: iterations of cell {key} are not "
                f"0-based and contiguous"
            )
        cells[key] = tuple(cell[i] for i in range(n_iter))

    # Ragged iteration counts across measures are a format violation here,
    # not merely a validation finding downstream.
    for ds in sorted({k[0] for k in cells}):
        for me in methods:
            counts = {
                k[2]: len(v) for k, v in cells.items() if k[0] == ds and k[1] == me
            }
            if len(set(counts.values())) > 1:
                key = (ds, me, max(counts, key=lambda m: counts[m]))
                raise ParseError(
                    f"{path}:{last_line[key]}: iteration counts differ across "
                    f"measures for dataset {ds!r}, method {me!r}: "
                    + ", ".join(f"{m}={c}" for m, c in sorted(counts.items()))
                )

    return PerformanceTensor.build(
        datasets=datasets, methods=methods, measures=measures, cells=cells
    )


def write_results(tensor: PerformanceTensor, path) -> None:
    """Write a tensor back to the long-format results CSV (lossless)."""
    lines = [RESULTS_HEADER]
    for d in tensor.datasets:
        for me in tensor.methods:
            for ms in tensor.measures:
                cell = tensor.cell(d.id, me, ms.id)
                for it, value in enumerate(cell):
                    val = "" if value is None else fmt_float(value)
                    lines.append(f"{d.id},{me},{ms.id},{it},{val}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_datasets(datasets, path) -> None:
    lines = [DATASETS_HEADER]
    for d in datasets:
        lines.append(f"{d.id},{d.clin},{d.n},{d.n_eff},{d.p}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class SamplingConfig:
    n_perms: int = 50
    seed: int = 0


@dataclass(frozen=True)
class StudyConfig:
    measures: tuple
    multiverse: MultiverseConfig
    unfold: UnfoldOptions
    sampling: SamplingConfig


def filter_from_label(label: str) -> DatasetFilter:
    """Parse a filter label: ``all`` or ``<characteristic>_<below|at_or_above>``."""
    if label == FILTER_ALL:
        return DatasetFilter(kind=FILTER_ALL)
    for ch in CHARACTERISTICS:
        if label == f"{ch}_{BELOW}":
            return DatasetFilter(kind=MEDIAN_SPLIT, characteristic=ch, side=BELOW)
        if label == f"{ch}_{AT_OR_ABOVE}":
            return DatasetFilter(kind=MEDIAN_SPLIT, characteristic=ch, side=AT_OR_ABOVE)
    raise ConfigError(f"unknown data-set filter label {label!r}")


def _expect_keys(obj: dict, allowed, path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}: unknown key")


def _imputation_from_config(entry, path: str) -> ImputationStrategy:
    if isinstance(entry, str):
        if entry not in IMPUTATION_KINDS:
            raise ConfigError(f"{path}: unknown imputation kind {entry!r}")
        return ImputationStrategy(kind=entry)
    if isinstance(entry, dict):
        _expect_keys(entry, {"kind", "threshold"}, path)
        try:
            return ImputationStrategy(**entry)
        except (TypeError, ValueError) as err:
            raise ConfigError(f"{path}: {err}") from err
    raise ConfigError(f"{path}: expected a kind name or an object")


def _aggregation_from_config(entry, path: str) -> AggregationStrategy:
    if isinstance(entry, str):
        if entry not in AGGREGATION_KINDS:
            raise ConfigError(f"{path}: unknown aggregation kind {entry!r}")
        return AggregationStrategy(kind=entry)
    if isinstance(entry, dict):
        _expect_keys(entry, {"kind", "environment"}, path)
        try:
            return AggregationStrategy(**entry)
        except (TypeError, ValueError) as err:
            raise ConfigError(f"{path}: {err}") from err
    raise ConfigError(f"{path}: expected a kind name or an object")


def parse_config(path) -> StudyConfig:
    """Read and fully resolve the study configuration (JSON).

    Unknown keys are rejected. When ``multiverse.defaults`` is omitted and
    every option list holds exactly one entry, the defaults are inferred as
    those sole options.
    """
    import json

    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as err:
            raise ConfigError(f"{path}: invalid JSON: {err}") from err

    _expect_keys(raw, {"measures", "multiverse", "unfold", "sampling"}, "config")
    if "measures" not in raw or "multiverse" not in raw:
        raise ConfigError("config: 'measures' and 'multiverse' are required")

    measures = []
    for i, m in enumerate(raw["measures"]):
        p = f"config.measures[{i}]"
        if not isinstance(m, dict):
            raise ConfigError(f"{p}: expected an object")
        _expect_keys(m, {"id", "orientation", "random_value", "best_value"}, p)
        try:
            measures.append(MeasureSpec(**m))
        except (TypeError, ValueError) as err:
            raise ConfigError(f"{p}: {err}") from err
    measure_ids = [m.id for m in measures]

    mv = raw["multiverse"]
    _expect_keys(
        mv,
        {"filters", "measures", "imputations", "aggregations", "defaults",
         "stepwise_order"},
        "config.multiverse",
    )
    for field in ("filters", "measures", "imputations", "aggregations"):
        if field not in mv or not mv[field]:
            raise ConfigError(f"config.multiverse.{field}: required and non-empty")

    filters = []
    for i, label in enumerate(mv["filters"]):
        try:
            filters.append(filter_from_label(label))
        except ConfigError as err:
            raise ConfigError(f"config.multiverse.filters[{i}]: {err}") from err
    for i, mid in enumerate(mv["measures"]):
        if mid not in measure_ids:
            raise ConfigError(
                f"config.multiverse.measures[{i}]: {mid!r} is not a configured measure"
            )
    imputations = [
        _imputation_from_config(e, f"config.multiverse.imputations[{i}]")
        for i, e in enumerate(mv["imputations"])
    ]
    aggregations = [
        _aggregation_from_config(e, f"config.multiverse.aggregations[{i}]")
        for i, e in enumerate(mv["aggregations"])
    ]

    if "defaults" in mv:
        dflt = mv["defaults"]
        _expect_keys(dflt, set(CHOICES), "config.multiverse.defaults")
        for choice in CHOICES:
            if choice not in dflt:
                raise ConfigError(f"config.multiverse.defaults.{choice}: required")
        defaults = Universe(
            filter=filter_from_label(dflt["datasets"]),
            measure=dflt["measure"],
            imputation=_imputation_from_config(
                dflt["imputation"], "config.multiverse.defaults.imputation"
            ),
            aggregation=_aggregation_from_config(
                dflt["aggregation"], "config.multiverse.defaults.aggregation"
            ),
        )
    elif all(
        len(mv[f]) == 1 for f in ("filters", "measures", "imputations", "aggregations")
    ):
        defaults = Universe(
            filter=filters[0],
            measure=mv["measures"][0],
            imputation=imputations[0],
            aggregation=aggregations[0],
        )
    else:
        raise ConfigError(
            "config.multiverse.defaults: required when any choice has several options"
        )

    stepwise_order = tuple(mv.get("stepwise_order", CHOICES))
    try:
        multiverse = MultiverseConfig(
            filters=filters,
            measures=tuple(mv["measures"]),
            imputations=imputations,
            aggregations=aggregations,
            defaults=defaults,
            stepwise_order=stepwise_order,
        )
    except ValueError as err:
        raise ConfigError(f"config.multiverse: {err}") from err

    unfold_raw = raw.get("unfold", {})
    _expect_keys(
        unfold_raw,
        {"dim", "max_iter", "eps", "penalty_lambda", "penalty_omega", "n_starts",
         "seed", "tie_rule", "transform"},
        "config.unfold",
    )
    try:
        unfold = UnfoldOptions(**unfold_raw)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"config.unfold: {err}") from err

    sampling_raw = raw.get("sampling", {})
    _expect_keys(sampling_raw, {"n_perms", "seed"}, "config.sampling")
    try:
        sampling = SamplingConfig(**sampling_raw)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"config.sampling: {err}") from err

    return StudyConfig(
        measures=tuple(measures),
        multiverse=multiverse,
        unfold=unfold,
        sampling=sampling,
    )


def resolve_seed(cli_seed, config_seed) -> int:
    """Seed precedence: command line, then config, then BENCHFOLD_SEED, then 0."""
    if cli_seed is not None:
        return int(cli_seed)
    if config_seed is not None:
        return int(config_seed)
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError as err:
            raise ConfigError(f"{ENV_SEED} must be an integer, got {env!r}") from err
    return 0


# ---------------------------------------------------------------------------
# output files


def _universe_key_fields(universe: Universe):
    return dict(zip(("datasets", "measure", "imputation", "aggregation"),
                    universe.key()))


def universe_key_string(universe: Universe) -> str:
    return "|".join(universe.key())


def rankings_csv_text(table: RankingTable) -> str:
    header = ",".join(list(CHOICES) + list(table.methods))
    lines = [header]
    for u, row in zip(table.universes, table.ranks):
        key = list(u.key())
        lines.append(",".join(key + [fmt_float(r) for r in row]))
    return "\n".join(lines) + "\n"


def unfolding_json_obj(
    solution: UnfoldingSolution, table: RankingTable, options: UnfoldOptions,
    defaults: Universe | None = None,
) -> dict:
    universes = [_universe_key_fields(u) for u in table.universes]
    obj = {
        "options": {
            "dim": options.dim,
            "max_iter": options.max_iter,
            "eps": options.eps,
            "penalty_lambda": options.penalty_lambda,
            "penalty_omega": options.penalty_omega,
            "n_starts": options.n_starts,
            "seed": options.seed,
            "tie_rule": options.tie_rule,
            "transform": options.transform,
        },
        "stress": {
            "penalized": solution.stress_penalized,
            "raw": solution.stress_raw,
            "iterations": solution.iterations,
            "converged": solution.converged,
        },
        "methods": list(table.methods),
        "universes": universes,
        "ideal_points": [[float(v) for v in row] for row in solution.Z1],
        "object_points": [[float(v) for v in row] for row in solution.Z2],
        "transform_breakpoints": [
            [[lev, disp] for lev, disp in row] for row in solution.transform
        ],
    }
    if defaults is not None:
        obj["defaults"] = _universe_key_fields(defaults)
    return obj


def distances_csv_text(distances) -> str:
    lines = ["choice,alternative,context,distance"]
    for d in distances:
        ctx = "|".join(d.context_key)
        lines.append(f"{d.choice},{d.option_label},{ctx},{fmt_float(d.distance)}")
    return "\n".join(lines) + "\n"


def diagnostics_json_obj(
    permutation: PermutationTest | None,
    spp_rows,
    spp_cols,
    table: RankingTable | None,
    scree_map: dict | None,
) -> dict:
    obj: dict = {}
    if permutation is not None:
        obj["permutation_test"] = {
            "p_value": permutation.p_value,
            "n_perm": permutation.n_perm,
            "scheme": permutation.scheme,
            "observed_stress": permutation.observed_stress,
        }
    if spp_rows is not None and table is not None:
        obj["spp_rows"] = {
            universe_key_string(u): float(s)
            for u, s in zip(table.universes, spp_rows)
        }
        obj["spp_cols"] = {
            m: float(s) for m, s in zip(table.methods, spp_cols)
        }
    if scree_map is not None:
        obj["scree"] = {str(dim): float(v) for dim, v in sorted(scree_map.items())}
    return obj


def stepwise_json_obj(trajectories) -> dict:
    out = {}
    for t in trajectories:
        out[t.method] = {
            "start": _universe_key_fields(t.start_universe),
            "start_rank": t.start_rank,
            "steps": [
                {
                    "choice": s.choice,
                    "option": s.option_label,
                    "rank": s.rank,
                    "goodness": list(s.goodness),
                    "improved": s.improved,
                }
                for s in t.steps
            ],
            "final": _universe_key_fields(t.final_universe),
            "final_rank": t.final_rank,
        }
    return out


def write_outputs(
    out_dir,
    table: RankingTable | None = None,
    unfolding: dict | None = None,
    diagnostics: dict | None = None,
    stepwise: dict | None = None,
    distances=None,
    extra_files: dict | None = None,
) -> dict:
    """Write whichever artifacts are present plus a digest manifest.

    Returns the manifest (file name, sha256, bytes per entry). Identical
    inputs yield byte-identical files regardless of thread count.
    """
    os.makedirs(out_dir, exist_ok=True)
    files: dict = {}
    if table is not None:
        files["rankings.csv"] = rankings_csv_text(table)
    if unfolding is not None:
        files["unfolding.json"] = json_dumps(unfolding) + "\n"
    if diagnostics is not None:
        files["diagnostics.json"] = json_dumps(diagnostics) + "\n"
    if stepwise is not None:
        files["stepwise.json"] = json_dumps(stepwise) + "\n"
    if distances is not None:
        files["distances.csv"] = distances_csv_text(distances)
    for name, text in (extra_files or {}).items():
        files[name] = text

    entries = []
    for name in sorted(files):
        data = files[name].encode("utf-8")
        with open(os.path.join(out_dir, name), "wb") as fh:
            fh.write(data)
        entries.append(
            {
                "name": name,
                "sha256": hashlib.sha256(data).hexdigest(),
                "bytes": len(data),
            }
        )
    manifest = {"files": entries}
    with open(os.path.join(out_dir, "manifest.json"), "wb") as fh:
        fh.write((json_dumps(manifest) + "\n").encode("utf-8"))
    return manifest
