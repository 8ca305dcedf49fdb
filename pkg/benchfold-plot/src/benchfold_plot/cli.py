"""Render a figure from the analysis pipeline's output files.

Usage:
    benchfold-plot <kind> --in FILE [--in FILE ...] --out FILE
                   [--color-by CHOICE] [--format svg|png]

Kinds and their inputs:
    rank_dist      rankings.csv
    stepwise       stepwise.json
    unfolding_map  unfolding.json   (--color-by selects the colouring choice)
    distance_box   distances.csv
    scree          diagnostics.json
    spp            diagnostics.json
"""

from __future__ import annotations

import argparse
import sys
import traceback

from . import figures, readers, scene


def build(kind: str, inputs, color_by=None) -> scene.Scene:
    path = inputs[0]
    if kind == "rank_dist":
        universes, methods, ranks = readers.load_rankings(path)
        return figures.rank_dist(universes, methods, ranks)
    if kind == "stepwise":
        return figures.stepwise(readers.load_stepwise(path))
    if kind == "unfolding_map":
        return figures.unfolding_map(readers.load_unfolding(path), color_by)
    if kind == "distance_box":
        return figures.distance_box(readers.load_distances(path))
    if kind == "scree":
        return figures.scree_plot(readers.load_diagnostics(path))
    if kind == "spp":
        return figures.spp(readers.load_diagnostics(path))
    raise readers.PlotDataError(
        f"unknown figure kind {kind!r}; expected one of "
        f"{', '.join(figures.FIGURE_KINDS)}"
    )


def cli(argv) -> int:
    parser = argparse.ArgumentParser(prog="benchfold-plot",
                                     description=__doc__)
    parser.add_argument("kind")
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        metavar="FILE")
    parser.add_argument("--out", required=True)
    parser.add_argument("--color-by", dest="color_by")
    parser.add_argument("--format", choices=("svg", "png"), default="svg")
    try:
        args = parser.parse_args(argv)
    except SystemExit:
        return 1

    try:
        built = build(args.kind, args.inputs, args.color_by)
        scene.write(built, args.out, args.format)
    except readers.PlotDataError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2
    print(f"wrote {args.out}")
    return 0


def main() -> None:
    sys.exit(cli(sys.argv[1:]))
