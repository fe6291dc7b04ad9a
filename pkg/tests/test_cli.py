import csv
import io
import json

import jsonschema
import pytest

from zenoccp import schemas
from zenoccp.cli import main
from zenoccp.experiment import reproduce_report


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(text):
    return list(csv.DictReader(line for line in io.StringIO(text) if not line.startswith("#")))


def test_exact_table_row(capsys):
    code, out, _ = run(capsys, "exact", "--N", "60", "--M", "3", "--d", "2", "--mu", "1", "--row-from-table2", "1")
    assert code == 0
    row = _rows(out)[0]
    assert float(row["P1"]) == pytest.approx(0.99726, abs=5e-6)
    assert float(row["P2"]) == pytest.approx(0.99863, abs=5e-6)
    assert float(row["bound_p1"]) == pytest.approx(0.98903, abs=5e-6)
    assert row["truth"] == "0"


def test_exact_json_schema(capsys):
    code, out, _ = run(capsys, "exact", "--samples", "3", "--seed", "4", "--json")
    assert code == 0
    recs = json.loads(out)
    assert len(recs) == 4
    for r in recs:
        jsonschema.validate(r, schemas.EXACT_ROW)


def test_exact_mu_zero(capsys):
    code, out, _ = run(capsys, "exact", "--N", "20", "--M", "4", "--d", "3", "--mu", "0", "--samples", "2", "--json")
    assert code == 0
    for r in json.loads(out):
        assert r["classical"] == r["PE"] == r["P1"] == r["P2"] == pytest.approx(1.0)


def test_exact_bad_assignment(capsys):
    bad = json.dumps({"N": 60, "M": 2, "d": 2, "mu": 1, "x1": 0, "yM": 2})
    jsonschema.validate(json.loads(bad), schemas.ASSIGNMENT)
    code, _, err = run(capsys, "exact", "--assignment", bad)
    assert code == 1 and "not in any S_l" in err


def test_exact_assignment_file(capsys, tmp_path):
    p = tmp_path / "a.json"
    p.write_text(json.dumps({"N": 60, "M": 3, "d": 2, "mu": 1, "x1": 70, "pairs": [[55, 71]], "yM": 56}))
    code, out, _ = run(capsys, "exact", "--assignment", f"@{p}")
    assert code == 0 and _rows(out)[0]["B"] == "-2"
    code, _, _ = run(capsys, "exact", "--assignment", f"@{tmp_path / 'missing.json'}")
    assert code == 3


def test_invalid_instance_exit(capsys):
    code, _, err = run(capsys, "exact", "--N", "2", "--mu", "1")
    assert code == 1 and "overlap" in err


def test_montecarlo_columns_and_determinism(capsys, tmp_path):
    args = ["montecarlo", "--trials", "400", "--seed", "99", "--vary", "N", "--grid", "30,60"]
    code, a, _ = run(capsys, *args, "--workers", "1")
    assert code == 0
    code, b, _ = run(capsys, *args, "--workers", "8")
    assert a == b
    assert a.splitlines()[0].split(",") == schemas.MONTECARLO_COLUMNS
    assert len(_rows(a)) == 8


def test_montecarlo_skips_invalid_points(capsys):
    code, out, _ = run(capsys, "montecarlo", "--trials", "10", "--vary", "N", "--grid", "2,30", "--protocols", "P1")
    assert code == 0 and "# skipped N=2" in out and len(_rows(out)) == 1


def test_montecarlo_eta_sweep(capsys):
    code, out, _ = run(capsys, "montecarlo", "--trials", "200", "--vary", "eta", "--grid", "0:1:0.5", "--protocols", "PE")
    assert code == 0
    rows = _rows(out)
    assert [float(r["value"]) for r in rows] == [0.0, 0.5, 1.0]
    assert float(rows[0]["exact"]) == pytest.approx(0.5)


def test_montecarlo_needs_trials(capsys):
    assert run(capsys, "montecarlo", "--trials", "0")[0] == 1


def test_table2_report(capsys):
    rep = reproduce_report()
    code, out, _ = run(capsys, "table2")
    assert code == (0 if rep.ok else 2)
    assert f"{rep.mean_exp_1:.5f}" in out and f"{rep.mean_exp_2:.5f}" in out


def test_table2_json(capsys):
    code, out, _ = run(capsys, "table2", "--json")
    obj = json.loads(out)
    jsonschema.validate(obj, schemas.REPRO_REPORT)
    assert len(obj["rows"]) == 40


def test_table2_missing_dataset(capsys, tmp_path):
    code, _, err = run(capsys, "table2", "--dataset", str(tmp_path / "gone.csv"))
    assert code == 3 and "expected sha256" in err


def test_sweep_scaling(capsys):
    code, out, _ = run(capsys, "sweep-scaling", "--M", "3", "--d", "2", "--mu", "1")
    assert code == 0
    slopes = dict(line[2:].split("=") for line in out.splitlines() if line.startswith("# "))
    assert float(slopes["classical_slope"]) == pytest.approx(-1, abs=0.1)
    assert float(slopes["quantum_slope"]) == pytest.approx(-2, abs=0.1)
    assert len(_rows(out)) == 10


def test_sweep_scaling_degenerate(capsys):
    assert run(capsys, "sweep-scaling", "--mu", "0")[0] == 1


def test_efficiency_crossover(capsys):
    code, out, _ = run(capsys, "efficiency", "--json")
    obj = json.loads(out)
    eta = obj["crossover_p1_vs"]["P2"]
    assert 0 < eta < 1
    at_one = [r for r in obj["rows"] if float(r["eta"]) == 1.0]
    assert all(r["ideal"] == r["adjusted"] for r in at_one)


def test_out_flag(capsys, tmp_path):
    p = tmp_path / "o.csv"
    code, out, _ = run(capsys, "efficiency", "--grid", "0.5,1", "--out", str(p))
    assert code == 0 and out == ""
    assert p.read_text().startswith(",".join(schemas.EFFICIENCY_COLUMNS))
