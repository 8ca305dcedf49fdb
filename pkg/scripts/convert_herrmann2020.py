#!/usr/bin/env python3
"""Convert an export of the Herrmann et al. (2020) multi-omics benchmark
results into the input files this package reads.

The public repository stores iteration-level cross-validation results for
13 survival prediction methods on 18 TCGA data sets, evaluated with the
integrated Brier score and Uno's C-index. Export those results to a tidy
CSV (one row per data set, method, measure, and resampling iteration;
failed iterations as empty fields or NA) plus a data-set characteristics
table, then run:

    python scripts/convert_herrmann2020.py \
        --results raw_results.csv --characteristics raw_datasets.csv \
        --out-dir herrmann2020/

Column names in the raw files can be remapped with the --*-col flags.
The output pair (results.csv, datasets.csv) feeds the CLI directly and,
via BENCHFOLD_HERRMANN_DIR, the external-data acceptance tests.
"""

import argparse
import csv
import os
import sys

NA_TOKENS = {"", "NA", "NaN", "nan", "NULL"}

MEASURE_ALIASES = {
    "ibrier": "ibrier",
    "int.brier": "ibrier",
    "integrated_brier": "ibrier",
    "brier": "ibrier",
    "cindex": "cindex",
    "c.index": "cindex",
    "uno_c": "cindex",
    "unoc": "cindex",
}


def parse_args(argv):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--results", required=True,
                        help="tidy iteration-level results CSV")
    parser.add_argument("--characteristics", required=True,
                        help="data-set characteristics CSV")
    parser.add_argument("--out-dir", required=True)
    parser.add_argument("--dataset-col", default="dataset")
    parser.add_argument("--method-col", default="method")
    parser.add_argument("--measure-col", default="measure")
    parser.add_argument("--iteration-col", default="iteration")
    parser.add_argument("--value-col", default="value")
    parser.add_argument("--clin-col", default="clin")
    parser.add_argument("--n-col", default="n")
    parser.add_argument("--n-eff-col", default="n_eff")
    parser.add_argument("--p-col", default="p")
    parser.add_argument("--id-col", default="dataset")
    return parser.parse_args(argv)


def main(argv=None) -> int:
    args = parse_args(argv if argv is not None else sys.argv[1:])
    os.makedirs(args.out_dir, exist_ok=True)

    rows = []
    with open(args.results, newline="", encoding="utf-8") as fh:
        for record in csv.DictReader(fh):
            measure = record[args.measure_col].strip().lower()
            if measure not in MEASURE_ALIASES:
                raise SystemExit(f"unknown measure name {measure!r}; "
                                 f"known: {sorted(MEASURE_ALIASES)}")
            raw_value = record[args.value_col].strip()
            value = "" if raw_value in NA_TOKENS else repr(float(raw_value))
            rows.append((
                record[args.dataset_col].strip(),
                record[args.method_col].strip(),
                MEASURE_ALIASES[measure],
                int(record[args.iteration_col]),
                value,
            ))

    # iterations in exports are often 1-based; shift per cell to 0-based
    min_iter = {}
    for ds, me, ms, it, _ in rows:
        key = (ds, me, ms)
        min_iter[key] = min(it, min_iter.get(key, it))
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))

    out_results = os.path.join(args.out_dir, "results.csv")
    with open(out_results, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dataset_id,method_id,measure_id,iteration,value\n")
        for ds, me, ms, it, value in rows:
            fh.write(f"{ds},{me},{ms},{it - min_iter[(ds, me, ms)]},{value}\n")

    out_datasets = os.path.join(args.out_dir, "datasets.csv")
    with open(args.characteristics, newline="", encoding="utf-8") as fh:
        with open(out_datasets, "w", encoding="utf-8", newline="\n") as out:
            out.write("id,clin,n,n_eff,p\n")
            for record in csv.DictReader(fh):
                out.write(
                    f"{record[args.id_col].strip()},"
                    f"{int(record[args.clin_col])},{int(record[args.n_col])},"
                    f"{int(record[args.n_eff_col])},{int(record[args.p_col])}\n"
                )

    print(f"wrote {out_results} and {out_datasets}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
