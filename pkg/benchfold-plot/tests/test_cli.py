import pytest

from benchfold_plot.cli import cli
from benchfold_plot.figures import FIGURE_KINDS

INPUT_FOR = {
    "rank_dist": "rankings",
    "stepwise": "stepwise",
    "unfolding_map": "unfolding",
    "distance_box": "distances",
    "scree": "diagnostics",
    "spp": "diagnostics",
}


@pytest.mark.parametrize("kind", FIGURE_KINDS)
@pytest.mark.parametrize("fmt", ["svg", "png"])
def test_render_all_kinds_both_formats(kind, fmt, fixtures, tmp_path):
    out = tmp_path / f"{kind}.{fmt}"
    args = [kind, "--in", fixtures[INPUT_FOR[kind]], "--out", str(out),
            "--format", fmt]
    if kind == "unfolding_map":
        args += ["--color-by", "measure"]
    assert cli(args) == 0
    data = out.read_bytes()
    assert data
    if fmt == "svg":
        assert data.startswith(b"<svg")
    else:
        assert data.startswith(b"\x89PNG")


@pytest.mark.parametrize("kind", FIGURE_KINDS)
def test_output_byte_stable_across_runs(kind, fixtures, tmp_path):
    args_for = lambda out: [kind, "--in", fixtures[INPUT_FOR[kind]],
                            "--out", str(out)] + (
        ["--color-by", "datasets"] if kind == "unfolding_map" else [])
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    assert cli(args_for(first)) == 0
    assert cli(args_for(second)) == 0
    assert first.read_bytes() == second.read_bytes()


def test_png_byte_stable_across_runs(fixtures, tmp_path):
    first, second = tmp_path / "a.png", tmp_path / "b.png"
    for out in (first, second):
        assert cli(["unfolding_map", "--in", fixtures["unfolding"],
                    "--out", str(out), "--format", "png",
                    "--color-by", "measure"]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_unknown_kind_exits_one(fixtures, tmp_path, capsys):
    assert cli(["sunburst", "--in", fixtures["rankings"],
                "--out", str(tmp_path / "x.svg")]) == 1
    assert "unknown figure kind" in capsys.readouterr().err


def test_schema_mismatch_exits_one(fixtures, tmp_path, capsys):
    # feeding the wrong file to a kind is a schema error, not a crash
    assert cli(["rank_dist", "--in", fixtures["unfolding"],
                "--out", str(tmp_path / "x.svg")]) == 1
    assert "error:" in capsys.readouterr().err


def test_empty_distances_reports_no_data(tmp_path, capsys):
    empty = tmp_path / "d.csv"
    empty.write_text("choice,alternative,context,distance\n")
    assert cli(["distance_box", "--in", str(empty),
                "--out", str(tmp_path / "x.svg")]) == 1
    assert "no data" in capsys.readouterr().err


def test_missing_required_flags_exit_one():
    assert cli(["rank_dist"]) == 1
