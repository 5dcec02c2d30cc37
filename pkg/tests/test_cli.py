import csv
import io
import json
import subprocess
import sys

import pytest

from sgraph.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1].startswith("# units: ")
    config = json.loads(lines[0][len("# config: "):])
    units = dict(item.split("=") for item in lines[1][len("# units: "):].split())
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[2:]))))
    return config, units, rows


def test_analyze_odd(capsys):
    code, out, _ = call(capsys, "analyze", "--set", "odd", "--lambda", "1")
    assert code == 0
    config, units, rows = read_csv(out)
    assert config["set"] == "odd" and config["command"] == "analyze"
    assert units["mu_star"] == "real" and units["nu"] == "per_vertex"
    assert float(rows[0]["mu_star"]) == pytest.approx(1.19968, abs=1e-5)
    assert rows[0]["unique"] == "1"


def test_scan_zero_three(capsys):
    code, out, _ = call(capsys, "scan", "--set", "set:0,3", "--lambda", "1:4:300")
    assert code == 0
    _, _, rows = read_csv(out)
    grid = [r for r in rows if r["row_type"] == "grid"]
    trans = [r for r in rows if r["row_type"] == "transition"]
    assert len(grid) == 300
    assert [r["transition"] for r in trans] == ["jump"]
    assert float(trans[0]["lambda"]) == pytest.approx(2.36, abs=0.01)


def test_scan_log_grid(capsys):
    code, out, _ = call(capsys, "scan", "--set", "even", "--lambda", "0.5:2:50", "--log",
                        "--format", "json")
    assert code == 0
    doc = json.loads(out)
    lams = [r["lambda"] for r in doc["records"] if r["row_type"] == "grid"]
    assert lams[1] / lams[0] == pytest.approx(lams[-1] / lams[-2])


def test_enumerate_closed_form(capsys):
    code, out, _ = call(capsys, "enumerate", "--set", "set:0,2", "--n", "4", "--p", "0.3",
                        "--format", "json")
    assert code == 0
    doc = json.loads(out)
    p, q = 0.3, 0.7
    assert doc["records"][0]["Z"] == pytest.approx(q**6 + 4 * p**3 * q**3 + 3 * p**4 * q**2,
                                                   abs=1e-12)
    assert {c["name"]: c["unit"] for c in doc["columns"]}["graphs"] == "count"
    assert sum(doc["laws"][0]["edge_law"]) == pytest.approx(1.0)


def test_giant_and_core(capsys):
    code, out, _ = call(capsys, "giant", "--set", "ge:0", "--lambda", "2")
    assert code == 0
    _, units, rows = read_csv(out)
    assert units["gamma_star"] == "fraction"
    assert float(rows[0]["gamma_star"]) == pytest.approx(0.79681, abs=1e-5)
    code, out, _ = call(capsys, "core", "--set", "ge:0", "--lambda", "4", "--k", "2,3")
    assert code == 0
    _, _, rows = read_csv(out)
    assert [r["k"] for r in rows] == ["2", "3"]


def test_partition(capsys):
    code, out, _ = call(capsys, "partition", "--set", "even", "--lambda", "2", "--n", "20,40")
    assert code == 0
    _, _, rows = read_csv(out)
    errs = [float(r["abs_error"]) for r in rows]
    assert errs[0] > errs[1]
    assert float(rows[0]["nu"]) == pytest.approx(0.1)


def test_simulate_seeded_bytes(capsys, tmp_path):
    argv = ["simulate", "--set", "ge:0", "--lambda", "1.5", "--n", "3000", "--reps", "2",
            "--seed", "4", "--multigraph", "--k", "2"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(argv + ["--out", str(a)]) == 0
    assert run(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    _, units, rows = read_csv(a.read_text())
    assert [r["row_type"] for r in rows] == ["prediction", "replicate", "replicate",
                                            "max_abs_deviation"]
    assert units["core2_fraction"] == "fraction"


@pytest.mark.parametrize("argv", [
    ["analyze", "--set", "bogus", "--lambda", "1"],
    ["analyze", "--set", "odd", "--lambda", "-1"],
    ["analyze", "--set", "odd"],
    ["scan", "--set", "even", "--lambda", "2"],
    ["enumerate", "--set", "even", "--n", "9"],
    ["simulate", "--set", "odd", "--lambda", "1", "--n", "5"],
    ["partition", "--set", "even", "--n", "10"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    code, _, _ = call(capsys, *argv)
    assert code == 2


def test_tie_reports_branches(capsys):
    from sgraph.chareq import scan_phases
    from sgraph.degree_set import parse_degree_set
    lam = scan_phases(parse_degree_set("set:0,3"), 1.0, 4.0).jumps[0].lambda_c
    code, _, err = call(capsys, "giant", "--set", "set:0,3", "--lambda", repr(lam))
    assert code == 1
    rec = json.loads(err.strip().splitlines()[-1])
    assert rec["error"] == "numerical" and len(rec["branches"]) == 2


def test_numerical_errors(capsys):
    code, _, err = call(capsys, "giant", "--set", "set:0,2", "--lambda", "1")
    assert code == 1
    assert json.loads(err)["type"] == "StructureError"
    code, _, err = call(capsys, "simulate", "--set", "set:4", "--lambda", "4", "--n", "6",
                        "--max-attempts", "2")
    assert code == 1
    assert json.loads(err)["attempts"] == 2


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("SGRAPH_SET", "odd")
    monkeypatch.setenv("SGRAPH_FORMAT", "json")
    code, out, _ = call(capsys, "analyze", "--lambda", "1")
    assert code == 0
    assert json.loads(out)["config"]["set"] == "odd"
    code, out, _ = call(capsys, "analyze", "--lambda", "1", "--set", "ge:0")
    assert json.loads(out)["records"][0]["mu_star"] == pytest.approx(1.0)


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "sgraph", "analyze", "--set", "ge:0",
                          "--lambda", "2"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "mu_star" in out.stdout
