"""Acceptance criterion for the renderer, printed as a PASS/FAIL line."""

import time
import xml.etree.ElementTree as ET

from benchfold_plot import readers
from benchfold_plot.cli import cli
from benchfold_plot.figures import FIGURE_KINDS

from test_cli import INPUT_FOR

NS = {"svg": "http://www.w3.org/2000/svg"}


def test_renderer_acceptance(fixtures, tmp_path):
    start = time.perf_counter()
    try:
        first_bytes = {}
        for run in ("a", "b"):
            for kind in FIGURE_KINDS:
                out = tmp_path / f"{run}_{kind}.svg"
                args = [kind, "--in", fixtures[INPUT_FOR[kind]],
                        "--out", str(out)]
                if kind == "unfolding_map":
                    args += ["--color-by", "measure"]
                assert cli(args) == 0, f"{kind} failed to render"
                if run == "a":
                    first_bytes[kind] = out.read_bytes()
                else:
                    assert out.read_bytes() == first_bytes[kind], \
                        f"{kind} output not byte-stable"

        unfolding = readers.load_unfolding(fixtures["unfolding"])
        tree = ET.fromstring(first_bytes["unfolding_map"])
        circles = tree.findall(".//svg:circle", NS)
        triangles = tree.findall(".//svg:polygon", NS)
        assert len(circles) == len(unfolding["universes"])
        assert len(triangles) == len(unfolding["methods"])

        rows = readers.load_distances(fixtures["distances"])
        tree = ET.fromstring(first_bytes["distance_box"])
        boxes = [r for r in tree.findall(".//svg:rect", NS)
                 if r.get("class") == "box"]
        assert len(boxes) == len({(r[0], r[1]) for r in rows})
    except BaseException:
        print(f"FAIL  renderer: six kinds, element counts, byte-stable "
              f"({time.perf_counter() - start:.1f}s)")
        raise
    elapsed = time.perf_counter() - start
    print(f"PASS  renderer: six kinds, element counts, byte-stable "
          f"({elapsed:.1f}s)")
    assert elapsed < 30.0
