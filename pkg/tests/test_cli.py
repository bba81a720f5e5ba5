import io
import json
import time

import jsonschema
import pytest

from dpp.cli import EXIT, VERDICT_SCHEMA, main, read_dimacs
from dpp.fmt import load, parse_process

from conftest import MODELS


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def test_check_example1():
    t = time.perf_counter()
    code, text = run("check", MODELS / "example1.dpp", "--algorithm", "general")
    assert time.perf_counter() - t < 5
    assert code == 0
    assert text.startswith("Reachable")
    witness = [line for line in text.splitlines() if line.startswith("witness:")][0]
    assert "w(g0,#)" in witness


def test_check_empty_model():
    code, text = run("check", MODELS / "empty.dpp")
    assert code == 1 and text.startswith("Unreachable")


def test_emit_witness_prints_run():
    code, text = run("check", MODELS / "example2.dpp", "--emit-witness")
    assert code == 0
    assert "labels:" in text and "run:" in text
    assert "o(x,#)" in text.splitlines()[-1]


@pytest.mark.parametrize("name", ["example1.dpp", "example2.dpp", "empty.dpp", "pushdown.dpp"])
def test_json_schema_and_exit_code(name):
    code, text = run("check", MODELS / name, "--json")
    doc = json.loads(text)
    jsonschema.validate(doc, VERDICT_SCHEMA)
    assert code == EXIT[doc["verdict"]]


def test_resource_exit_code():
    code, text = run("check", MODELS / "example2.dpp", "--algorithm", "general", "--max-states", "5", "--json")
    assert json.loads(text)["verdict"] == "resource" and code == 2


def test_algorithms_from_cli():
    for algo in ("general", "gen-futures", "auto"):
        assert run("check", MODELS / "example2.dpp", "--algorithm", algo)[0] == 0
    assert run("check", MODELS / "example2.dpp", "--algorithm", "gen-futures", "--poly-b")[0] == 0
    assert run("check", MODELS / "example1.dpp", "--algorithm", "flatten")[0] == 2
    assert run("check", MODELS / "empty.dpp", "--algorithm", "flatten")[0] == 1


def test_dot_export(tmp_path):
    dot = tmp_path / "a.dot"
    run("check", MODELS / "example1.dpp", "--dot", dot)
    assert dot.read_text().startswith("digraph")


def test_core_command():
    code, text = run("core", MODELS / "example1.dpp", "--level", "1")
    assert code == 0
    lines = text.splitlines()
    assert "spawn(q) w(g0,#)" in lines
    assert lines[0] == "spawn(p)"
    code, text = run("core", MODELS / "example1.dpp", "--level", "0", "--json")
    assert json.loads(text)["level"] == 0


def test_oracle_command():
    code, text = run("oracle", MODELS / "example1.dpp", "--depth", "2", "--children", "1")
    assert code == 1 and text.startswith("NoneWithinBounds")
    code, text = run("oracle", MODELS / "example1.dpp", "--depth", "2", "--children", "2", "--json")
    assert code == 0 and json.loads(text)["found"]
    code, text = run("oracle", MODELS / "example1.dpp", "--semantics", "set", "--depth", "2")
    assert code == 0 and text.startswith("WitnessFound")


def test_flatten_command(tmp_path):
    code, text = run("flatten", MODELS / "empty.dpp")
    assert code == 0 and parse_process(text).init == "init'"
    out = tmp_path / "cd.json"
    assert run("flatten", MODELS / "empty.dpp", "--export-cd", "--out", out)[0] == 0
    assert json.loads(out.read_text())["format"] == "dpp-cd/1"
    code, _ = run("flatten", MODELS / "example1.dpp")
    assert code == 2


def test_encode_sat(tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("c tiny\np cnf 2 2\n1 2 0\n-1 0\n")
    assert read_dimacs(cnf.read_text()) == (2, [(1, 2), (-1,)])
    out = tmp_path / "f.dpp"
    assert run("encode-sat", cnf, "--out", out)[0] == 0
    assert run("check", out)[0] == 0
    cnf.write_text("p cnf 1 2\n1 0\n-1 0\n")
    run("encode-sat", cnf, "--out", out)
    assert run("check", out, "--algorithm", "simple-futures", "--guess")[0] == 1


def test_compare_table():
    code, text = run("compare", "--seed", "7", "--count", "8")
    assert code == 0
    assert text.splitlines()[0].split()[:4] == ["spec", "solver", "multiset", "set"]
    assert text.splitlines()[-1] == "8/8 agree"


def test_compare_directory():
    code, text = run("compare", "--dir", MODELS, "--count", "3", "--depth", "2")
    assert code == 0 and text.splitlines()[-1] == "3/3 agree"


def test_usage_and_parse_errors(tmp_path, capsys):
    assert run("frobnicate")[0] == 2
    assert run("check", tmp_path / "missing.dpp")[0] == 2
    bad = tmp_path / "bad.dpp"
    bad.write_text("values: 0 #\ninit_value: 0\ntarget: #\ninit: q\nrules:\n  q --r(y,0)--> q\n")
    assert run("check", bad)[0] == 2
    assert "line 6" in capsys.readouterr().err


def test_golden_models_parse():
    for f in MODELS.glob("*.dpp"):
        load(f)
