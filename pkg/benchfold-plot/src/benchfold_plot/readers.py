"""Schema-checked loading of the upstream pipeline's output files.

The renderer is deliberately decoupled from the analysis package: it only
reads the documented CSV/JSON artifacts. Every loader validates the parts
of the schema it depends on and raises :class:`PlotDataError` with a
pointed message otherwise.
"""

from __future__ import annotations

import json

CHOICES = ("datasets", "measure", "imputation", "aggregation")


class PlotDataError(ValueError):
    """An input file does not match the documented schema."""


def _load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise PlotDataError(f"{path}: file not found")
    except json.JSONDecodeError as err:
        raise PlotDataError(f"{path}: invalid JSON: {err}")


def _require(obj: dict, key: str, path) -> object:
    if key not in obj:
        raise PlotDataError(f"{path}: missing key {key!r}")
    return obj[key]


def load_unfolding(path) -> dict:
    """Coordinates plus universe keys from ``unfolding.json``."""
    obj = _load_json(path)
    methods = _require(obj, "methods", path)
    universes = _require(obj, "universes", path)
    ideal = _require(obj, "ideal_points", path)
    objects = _require(obj, "object_points", path)
    if len(ideal) != len(universes):
        raise PlotDataError(
            f"{path}: {len(ideal)} ideal points but {len(universes)} universes"
        )
    if len(objects) != len(methods):
        raise PlotDataError(
            f"{path}: {len(objects)} object points but {len(methods)} methods"
        )
    for u in universes:
        for choice in CHOICES:
            if choice not in u:
                raise PlotDataError(f"{path}: universe entry lacks {choice!r}")
    dims = {len(row) for row in list(ideal) + list(objects)}
    if len(dims) != 1:
        raise PlotDataError(f"{path}: mixed coordinate dimensions {sorted(dims)}")
    return obj


def load_rankings(path):
    """Universe keys, method ids, and the rank matrix from ``rankings.csv``."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except FileNotFoundError:
        raise PlotDataError(f"{path}: file not found")
    if not lines:
        raise PlotDataError(f"{path}: empty file")
    header = lines[0].split(",")
    if header[:4] != list(CHOICES):
        raise PlotDataError(
            f"{path}: header must start with {','.join(CHOICES)}"
        )
    methods = header[4:]
    if not methods:
        raise PlotDataError(f"{path}: no method columns")
    universes, ranks = [], []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise PlotDataError(f"{path}:{ln}: expected {len(header)} fields")
        universes.append(dict(zip(CHOICES, parts[:4])))
        try:
            ranks.append([float(v) for v in parts[4:]])
        except ValueError:
            raise PlotDataError(f"{path}:{ln}: non-numeric rank")
    return universes, methods, ranks


def load_distances(path):
    """Rows of (choice, alternative, context, distance) from ``distances.csv``."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except FileNotFoundError:
        raise PlotDataError(f"{path}: file not found")
    if not lines or lines[0] != "choice,alternative,context,distance":
        raise PlotDataError(
            f"{path}: expected header 'choice,alternative,context,distance'"
        )
    rows = []
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise PlotDataError(f"{path}:{ln}: expected 4 fields")
        try:
            rows.append((parts[0], parts[1], parts[2], float(parts[3])))
        except ValueError:
            raise PlotDataError(f"{path}:{ln}: non-numeric distance")
    return rows


def load_diagnostics(path) -> dict:
    return _load_json(path)


def load_stepwise(path) -> dict:
    obj = _load_json(path)
    if not obj:
        raise PlotDataError(f"{path}: no trajectories")
    for method, traj in obj.items():
        for key in ("start_rank", "steps", "final_rank"):
            if key not in traj:
                raise PlotDataError(f"{path}: trajectory {method!r} lacks {key!r}")
    return obj
