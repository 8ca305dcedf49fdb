import importlib.util
import os

from benchfold.io import parse_datasets, parse_results
from conftest import CINDEX, IBRIER

SCRIPT = os.path.join(os.path.dirname(__file__), "..", "scripts",
                      "convert_herrmann2020.py")
spec = importlib.util.spec_from_file_location("convert_herrmann2020", SCRIPT)
convert = importlib.util.module_from_spec(spec)
spec.loader.exec_module(convert)


def test_convert_tidy_export(tmp_path):
    raw = tmp_path / "raw.csv"
    raw.write_text(
        "dataset,method,measure,iteration,value\n"
        "BLCA,Lasso,int.brier,1,0.17\n"
        "BLCA,Lasso,int.brier,2,NA\n"
        "BLCA,Lasso,uno_c,1,0.61\n"
        "BLCA,Lasso,uno_c,2,0.64\n"
    )
    chars = tmp_path / "chars.csv"
    chars.write_text("dataset,clin,n,n_eff,p\nBLCA,5,382,172,79895\n")
    out = tmp_path / "converted"
    assert convert.main([
        "--results", str(raw), "--characteristics", str(chars),
        "--out-dir", str(out),
    ]) == 0

    datasets = parse_datasets(out / "datasets.csv")
    tensor = parse_results(out / "results.csv", datasets, [IBRIER, CINDEX])
    assert tensor.cell("BLCA", "Lasso", "ibrier") == (0.17, None)
    assert tensor.cell("BLCA", "Lasso", "cindex") == (0.61, 0.64)
    assert datasets[0].n_eff == 172
