import json

import pytest

from benchfold_plot.readers import (
    PlotDataError,
    load_distances,
    load_rankings,
    load_stepwise,
    load_unfolding,
)


def test_load_unfolding_fixture(fixtures):
    obj = load_unfolding(fixtures["unfolding"])
    assert len(obj["ideal_points"]) == len(obj["universes"]) == 16
    assert len(obj["object_points"]) == len(obj["methods"]) == 4
    assert obj["defaults"]["measure"] == "ibrier"


def test_load_unfolding_rejects_mismatched_counts(tmp_path):
    path = tmp_path / "u.json"
    path.write_text(json.dumps({
        "methods": ["a", "b"],
        "universes": [{"datasets": "all", "measure": "x",
                       "imputation": "i", "aggregation": "g"}],
        "ideal_points": [[0, 0], [1, 1]],
        "object_points": [[0, 0], [1, 1]],
    }))
    with pytest.raises(PlotDataError, match="ideal points"):
        load_unfolding(path)


def test_load_unfolding_rejects_incomplete_universe(tmp_path):
    path = tmp_path / "u.json"
    path.write_text(json.dumps({
        "methods": ["a"],
        "universes": [{"datasets": "all"}],
        "ideal_points": [[0, 0]],
        "object_points": [[0, 0]],
    }))
    with pytest.raises(PlotDataError, match="lacks"):
        load_unfolding(path)


def test_load_rankings_fixture(fixtures):
    universes, methods, ranks = load_rankings(fixtures["rankings"])
    assert len(universes) == len(ranks) == 16
    assert len(methods) == 4
    assert all(len(row) == 4 for row in ranks)


def test_load_rankings_rejects_wrong_header(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("method,rank\nm0,1\n")
    with pytest.raises(PlotDataError, match="header"):
        load_rankings(path)


def test_load_distances_fixture(fixtures):
    rows = load_distances(fixtures["distances"])
    assert rows
    assert all(len(r) == 4 for r in rows)
    assert {r[0] for r in rows} == {"datasets", "measure",
                                    "imputation", "aggregation"}


def test_load_distances_rejects_bad_value(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("choice,alternative,context,distance\na,b,c,far\n")
    with pytest.raises(PlotDataError, match="non-numeric"):
        load_distances(path)


def test_load_stepwise_fixture(fixtures):
    obj = load_stepwise(fixtures["stepwise"])
    assert len(obj) == 4
    for traj in obj.values():
        assert traj["final_rank"] <= traj["start_rank"]


def test_missing_file_is_data_error(tmp_path):
    with pytest.raises(PlotDataError, match="not found"):
        load_rankings(tmp_path / "absent.csv")
    with pytest.raises(PlotDataError, match="not found"):
        load_unfolding(tmp_path / "absent.json")
