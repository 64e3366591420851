import csv
import io
import itertools
import json
import subprocess
import sys

import pytest

from layerdep import casestudy_path, render, serialize_model
from layerdep.cli import run

from conftest import model_doc

CASE = str(casestudy_path())


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def broken_model(tmp_path, casestudy):
    doc = json.loads(serialize_model(casestudy))
    del doc["projections"][0]["map"]["VServer_1"]
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_validate_ok(capsys):
    assert invoke(capsys, "validate", "--model", CASE)[:2] == (0, "model is valid\n")


@pytest.mark.parametrize("command", ["validate", "analyze", "plan"])
def test_invalid_model_exit_code(capsys, broken_model, command):
    code, out, err = invoke(capsys, command, "--model", broken_model)
    assert code == 1
    assert "VServer_1" in err and out == ""


def test_syntax_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{")
    code, _, err = invoke(capsys, "flows", "--model", str(path))
    assert code == 1 and "line 1" in err


def test_path_explosion_exit_code(capsys, tmp_path):
    names = [f"n{i}" for i in range(10)]
    doc = model_doc({1: (names, list(itertools.combinations(names, 2)), []), 2: (["X"], [], [])},
                    projections=[(2, {"X": ["n0"]})], requirements=[("r", 1, "n0", "n9")])
    path = tmp_path / "dense.json"
    path.write_text(doc)
    code, _, err = invoke(capsys, "analyze", "--model", str(path))
    assert code == 2 and "n0 and n9" in err


def test_unanalyzed_layer(capsys):
    assert invoke(capsys, "reliability", "--model", CASE, "--layer", "4")[0] == 2


def test_plan_json(capsys):
    code, out, _ = invoke(capsys, "plan", "--model", CASE, "--tolerance", "1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc) == 8
    assert set(doc[0]) == {"id", "layer", "kind", "targets", "steps", "expected_state"}
    assert doc[0]["steps"][0]["phase"] == "sensing"


def test_double_fault_plan_json(capsys):
    _, out, _ = invoke(capsys, "plan", "--model", CASE, "--tolerance", "2", "--format", "json")
    assert len(json.loads(out)) == 16


def test_expressions_rows(capsys):
    _, out, _ = invoke(capsys, "analyze", "--model", CASE, "--section", "expressions", "--quiet")
    rows = out.strip().splitlines()[2:]
    assert [r.split()[1] for r in rows] == ["Service", "Logical", "Physical"]
    assert "DNS_Server_1 ∧ WEB_Server_1" in rows[0]
    assert "(Server_1 ∨ Server_2) ∧ (Switch_1 ∨ Switch_2)" in rows[2]


def test_ascii(capsys):
    _, out, _ = invoke(capsys, "analyze", "--model", CASE, "--section", "expressions", "--ascii")
    assert "(Server_1 | Server_2) & (Switch_1 | Switch_2)" in out and "∧" not in out


def test_truth_table_render(bundle):
    text = render(bundle, "truth-table", layer=1, header=False)
    lines = text.strip().splitlines()
    assert sum(1 for ln in lines if ln.split()[0].isdigit()) == 16
    assert lines[-1].split()[-1] == "1.0000000000"
    assert "0.6580712823" in text


def test_reliability_modes(capsys):
    _, out, _ = invoke(capsys, "reliability", "--model", CASE, "--mode", "limited", "--k", "1")
    assert "0.9593835902" in out and "1.030" in out
    _, out, _ = invoke(capsys, "reliability", "--model", CASE, "--mode", "closed")
    assert "0.9693723651" in out


def test_reliability_json_full_precision(capsys, bundle):
    _, out, _ = invoke(capsys, "reliability", "--model", CASE, "--format", "json")
    doc = json.loads(out)
    assert doc[0]["exact"] == bundle.reliability[1].exact


def test_truth_table_csv(capsys):
    _, out, _ = invoke(capsys, "reliability", "--model", CASE, "--table", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 16
    assert sum(float(r["probability"]) for r in rows) == pytest.approx(1.0, abs=1e-12)


def test_flows_csv(capsys):
    _, out, _ = invoke(capsys, "flows", "--model", CASE, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    physical = [r for r in rows if r["layer"] == "1" and r["requirement"] == "client-dns"]
    assert len(physical) == 16


def test_curve_csv(capsys):
    code, out, _ = invoke(capsys, "curve", "--l", "2", "--r", "2", "--from", "0.9", "--to", "0.99", "--step", "0.01")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "p,deviation_percent"
    assert len(lines) == 11
    assert lines[1].startswith("0.9,3.30")


def test_curve_bad_step(capsys):
    assert invoke(capsys, "curve", "--l", "2", "--r", "2", "--step", "0")[0] == 2


@pytest.mark.parametrize("argv", [
    ["analyze", "--format", "json"],
    ["reliability", "--table"],
    ["plan", "--tolerance", "2", "--format", "json"],
    ["flows"],
])
def test_byte_identical(capsys, argv):
    first = invoke(capsys, *argv, "--model", CASE)[1]
    assert first == invoke(capsys, *argv, "--model", CASE)[1]


def test_entry_point():
    proc = subprocess.run([sys.executable, "-m", "layerdep", "plan", "--model", CASE, "--format", "json"],
                          capture_output=True, text=True, check=True)
    assert len(json.loads(proc.stdout)) == 8
