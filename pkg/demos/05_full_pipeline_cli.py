"""The whole pipeline through the command-line interface.

Writes a synthetic study to disk (results CSV, data-set metadata CSV, and
a study configuration), then drives the `benchfold` CLI end to end:
validation, the 288-universe grid, step-wise trajectories, the unfolding
fit, and the diagnostics. The resulting output directory is exactly what
the companion plot package consumes.

    python demos/05_full_pipeline_cli.py
"""

import json
import os
from importlib.machinery import SourceFileLoader

from benchfold.cli import cli
from benchfold.io import write_datasets, write_results

_here = os.path.dirname(__file__)
grid_demo = SourceFileLoader(
    "grid_demo", os.path.join(_here, "01_multiverse_grid.py")).load_module()
tensor = grid_demo.tensor

workdir = os.path.join(_here, "pipeline_run")
os.makedirs(workdir, exist_ok=True)
results = os.path.join(workdir, "results.csv")
datasets = os.path.join(workdir, "datasets.csv")
config = os.path.join(workdir, "study.json")
out = os.path.join(workdir, "out")

write_results(tensor, results)
write_datasets(tensor.datasets, datasets)
with open(config, "w", encoding="utf-8") as fh:
    json.dump({
        "measures": [
            {"id": "ibrier", "orientation": "lower_better",
             "random_value": 0.25, "best_value": 0.0},
            {"id": "cindex", "orientation": "higher_better",
             "random_value": 0.5, "best_value": 1.0},
        ],
        "multiverse": {
            "filters": ["all",
                        "clin_below", "clin_at_or_above",
                        "n_below", "n_at_or_above",
                        "n_eff_below", "n_eff_at_or_above",
                        "p_below", "p_at_or_above"],
            "measures": ["ibrier", "cindex"],
            "imputations": ["threshold20", "weighted",
                            "random_prediction", "mean_nonfailed"],
            "aggregations": ["mean", "median", "mean_rank", "best005"],
            "defaults": {"datasets": "all", "measure": "ibrier",
                         "imputation": "threshold20", "aggregation": "mean"},
            "stepwise_order": ["imputation", "aggregation",
                               "measure", "datasets"],
        },
        "unfold": {"dim": 2, "n_starts": 3, "seed": 42,
                   "eps": 1e-7, "max_iter": 2000},
        "sampling": {"n_perms": 50, "seed": 3},
    }, fh, indent=2)

base = ["--config", config, "--results", results,
        "--datasets", datasets, "--out", out]

for command in (["validate"], ["all"],
                ["sample-datasets", "--permutations", "50", "--seed", "3"]):
    print(f"\n$ benchfold {' '.join(command)}")
    status = cli(command + base)
    assert status == 0, f"command failed with exit {status}"

print(f"\nartifacts in {out}:")
for name in sorted(os.listdir(out)):
    size = os.path.getsize(os.path.join(out, name))
    print(f"  {name:<22} {size:>8} bytes")

print("""
Render figures from these artifacts with the companion package:
    benchfold-plot unfolding_map --in {out}/unfolding.json --out map.svg \\
        --color-by measure
""".replace("{out}", out))
