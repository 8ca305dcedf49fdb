import json

import pytest

from benchfold.cli import cli
from benchfold.io import write_datasets, write_results
from conftest import make_tensor


@pytest.fixture
def study(tmp_path):
    tensor = make_tensor(n_datasets=6, n_methods=4, seed=8, failure_rate=0.15)
    results = tmp_path / "results.csv"
    datasets = tmp_path / "datasets.csv"
    config = tmp_path / "study.json"
    write_results(tensor, results)
    write_datasets(tensor.datasets, datasets)
    config.write_text(json.dumps({
        "measures": [
            {"id": "ibrier", "orientation": "lower_better",
             "random_value": 0.25, "best_value": 0.0},
            {"id": "cindex", "orientation": "higher_better",
             "random_value": 0.5, "best_value": 1.0},
        ],
        "multiverse": {
            "filters": ["all", "n_below", "n_at_or_above"],
            "measures": ["ibrier", "cindex"],
            "imputations": ["threshold20", "weighted"],
            "aggregations": ["mean", "median"],
            "defaults": {"datasets": "all", "measure": "ibrier",
                         "imputation": "threshold20", "aggregation": "mean"},
        },
        "unfold": {"dim": 2, "n_starts": 1, "seed": 0,
                   "eps": 1e-6, "max_iter": 150},
        "sampling": {"n_perms": 5, "seed": 3},
    }))
    out = tmp_path / "out"
    return {
        "base": ["--config", str(config), "--results", str(results),
                 "--datasets", str(datasets), "--out", str(out)],
        "out": out,
        "tmp": tmp_path,
        "tensor": tensor,
    }


def test_validate_ok(study, capsys):
    assert cli(["validate"] + study["base"]) == 0
    assert "ok:" in capsys.readouterr().out


def test_validate_reports_violations(study, capsys):
    results = study["tmp"] / "ragged.csv"
    lines = ["dataset_id,method_id,measure_id,iteration,value"]
    # iteration counts differ across measures -> parse error, exit 1
    lines += ["d00,m0,ibrier,0,0.1", "d00,m0,cindex,0,0.6", "d00,m0,cindex,1,0.7"]
    results.write_text("\n".join(lines) + "\n")
    args = list(study["base"])
    args[args.index("--results") + 1] = str(results)
    assert cli(["validate"] + args) == 1
    assert "error:" in capsys.readouterr().err


def test_multiverse_writes_full_grid(study, capsys):
    assert cli(["multiverse"] + study["base"]) == 0
    rankings = (study["out"] / "rankings.csv").read_text().splitlines()
    assert len(rankings) == 1 + 3 * 2 * 2 * 2


def test_multiverse_threads_byte_identical(study):
    assert cli(["multiverse"] + study["base"] + ["--threads", "1"]) == 0
    single = (study["out"] / "rankings.csv").read_bytes()
    assert cli(["multiverse"] + study["base"] + ["--threads", "4"]) == 0
    assert (study["out"] / "rankings.csv").read_bytes() == single


def test_unfold_with_dim_override(study):
    assert cli(["unfold", "--dim", "1"] + study["base"]) == 0
    payload = json.loads((study["out"] / "unfolding.json").read_text())
    assert payload["options"]["dim"] == 1
    assert all(len(row) == 1 for row in payload["ideal_points"])
    assert len(payload["ideal_points"]) == 24
    assert len(payload["object_points"]) == 4


def test_stepwise_writes_trajectory(study):
    assert cli(["stepwise", "--method", "m1",
                "--order", "aggregation,imputation,measure,datasets"]
               + study["base"]) == 0
    payload = json.loads((study["out"] / "stepwise.json").read_text())
    steps = payload["m1"]["steps"]
    assert [s["choice"] for s in steps] == [
        "aggregation", "imputation", "measure", "datasets"]
    assert payload["m1"]["final_rank"] <= payload["m1"]["start_rank"]


def test_diagnose_writes_reports(study):
    assert cli(["diagnose", "--permutations", "19", "--seed", "5"]
               + study["base"]) == 0
    diag = json.loads((study["out"] / "diagnostics.json").read_text())
    assert diag["permutation_test"]["n_perm"] == 19
    assert 0 < diag["permutation_test"]["p_value"] <= 1
    spp = diag["spp_rows"]
    assert len(spp) == 24
    assert sum(spp.values()) == pytest.approx(100.0, abs=0.1)
    assert (study["out"] / "distances.csv").exists()


def test_sample_datasets_deterministic(study):
    args = ["sample-datasets", "--permutations", "5", "--seed", "3"]
    assert cli(args + study["base"]) == 0
    first = (study["out"] / "dataset_groups.csv").read_bytes()
    ranks_first = (study["out"] / "sampled_rankings.csv").read_bytes()
    assert cli(args + study["base"]) == 0
    assert (study["out"] / "dataset_groups.csv").read_bytes() == first
    assert (study["out"] / "sampled_rankings.csv").read_bytes() == ranks_first
    lines = first.decode().splitlines()
    assert lines[0] == "group_id,size,dataset_ids"
    assert lines[-1].split(",")[1] == "6"  # full set appended last


def test_all_produces_complete_artifact_set(study):
    assert cli(["all"] + study["base"]) == 0
    names = {p.name for p in study["out"].iterdir()}
    assert {"rankings.csv", "unfolding.json", "diagnostics.json",
            "stepwise.json", "distances.csv", "manifest.json"} <= names


def test_unknown_flag_exits_one(study, capsys):
    assert cli(["multiverse", "--frobnicate"] + study["base"]) == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_unknown_command_exits_one():
    assert cli(["explode"]) == 1


def test_missing_inputs_exit_one(study, capsys):
    assert cli(["multiverse"]) == 1
    args = list(study["base"])
    args[args.index("--results") + 1] = str(study["tmp"] / "absent.csv")
    assert cli(["multiverse"] + args) == 1
