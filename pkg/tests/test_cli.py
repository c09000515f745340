import json
import math
import subprocess
import sys

import jsonschema
import pytest

from mmcount.cli import main
from mmcount.formula import parse_dlp
from mmcount.results import RESULT_SCHEMA

from _gen import GUARDED, PAIRS8_TEXT, pigeonhole


@pytest.fixture
def files(tmp_path):
    (tmp_path / "guarded.cnf").write_text(GUARDED.to_dimacs())
    (tmp_path / "pairs.cnf").write_text(PAIRS8_TEXT)
    (tmp_path / "big.cnf").write_text("p cnf 30 1\n1 30 0\n")
    (tmp_path / "bad.cnf").write_text("p cnf 2 1\n1 3 0\n")
    (tmp_path / "ab.txns").write_text("0\n0 1\n")
    (tmp_path / "bad.txns").write_text("0 x\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def result(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    obj = json.loads(out)
    jsonschema.validate(obj, RESULT_SCHEMA)
    return obj


def test_minlb_example(files, capsys):
    obj = result(capsys, "minlb", "--delta", "0.2", files / "guarded.cnf")
    assert obj["bound_log2"] == pytest.approx(math.log2(3))
    assert obj["exact"] is True and obj["method"] == "ProjEnum" and obj["count"] == 3
    assert "elapsed_s" not in obj


@pytest.mark.parametrize("cmd, method", [("projenum", "ProjEnum"), ("bruteforce", "BruteForce"),
                                         ("hashcount", "HashCount")])
def test_count_commands(files, capsys, cmd, method):
    obj = result(capsys, cmd, files / "guarded.cnf")
    assert obj["method"] == method and obj["command"] == cmd


def test_hashcount_flags(files, capsys):
    obj = result(capsys, "hashcount", "--seed", "3", "--xor-over-all-vars", files / "pairs.cnf")
    assert obj["details"]["support_size"] == 16 and obj["seed"] == 3 and obj["delta"] == 0.2


def test_timing_flag(files, capsys):
    obj = result(capsys, "minlb", "--timing", files / "guarded.cnf")
    assert obj["elapsed_s"] >= 0


def test_output_is_byte_identical(files, capsys):
    args = ("minlb", "--cut-limit", "1", "--seed", "5", files / "guarded.cnf")
    first = run(capsys, *args)[1]
    assert json.loads(first)["method"] == "HashCount"
    assert first == run(capsys, *args)[1]


def test_bruteforce_guard(files, capsys):
    code, out, err = run(capsys, "bruteforce", files / "big.cnf")
    assert code == 1 and "exceeds" in err and out == ""


def test_dlp_export(files, capsys):
    code, out, _ = run(capsys, "dlp-export", files / "guarded.cnf")
    assert code == 0
    assert out.splitlines()[0] == "x1 ; x2 ; x3."
    assert len(parse_dlp(out)) == 3


def test_indep_support(files, capsys):
    obj = result(capsys, "indep-support", files / "pairs.cnf")
    assert obj["support"] == list(range(1, 17))


def test_mingen(files, capsys):
    obj = result(capsys, "mingen-count", files / "ab.txns")
    assert obj["count"] == 2 and obj["exact"]
    assert obj["details"]["clauses"] == 2
    obj = result(capsys, "mingen-count", "--enumerate", files / "ab.txns")
    assert obj["generators"] == [[], [1]]


@pytest.mark.parametrize("argv, code", [
    (["frobnicate"], 1),
    (["minlb", "--no-such-flag", "x.cnf"], 1),
    ([], 1),
    (["minlb", "missing.cnf"], 1),
])
def test_usage_errors(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_parse_errors(files, capsys):
    code, _, err = run(capsys, "minlb", files / "bad.cnf")
    assert code == 2 and "line 2" in err
    assert run(capsys, "mingen-count", files / "bad.txns")[0] == 2


def test_budget_exhausted(tmp_path, capsys):
    p = tmp_path / "php.cnf"
    p.write_text(pigeonhole(11).to_dimacs())
    code, out, _ = run(capsys, "minlb", "--timeout-s", "0.3", p)
    assert code == 3
    obj = json.loads(out)
    jsonschema.validate(obj, RESULT_SCHEMA)
    assert obj["status"] == "budget_exhausted"


def test_env_override(files, capsys, monkeypatch):
    monkeypatch.setenv("MMCOUNT_CUT_LIMIT", "1")
    monkeypatch.setenv("MMCOUNT_DELTA", "0.5")
    obj = result(capsys, "minlb", files / "guarded.cnf")
    assert obj["method"] == "HashCount" and obj["delta"] == 0.5
    # explicit flags still win
    obj = result(capsys, "minlb", "--cut-limit", "50", files / "guarded.cnf")
    assert obj["method"] == "ProjEnum"


def test_bench(files, capsys, tmp_path):
    out = tmp_path / "report.jsonl"
    obj = result(capsys, "bench", "--timeout-s", "30", "--methods", "projenum,minlb,bruteforce",
                 "--out", out, "--csv", tmp_path / "report.csv", files)
    assert obj["summary"]["instances"] == 6
    assert out.exists() and (tmp_path / "report.csv").exists()
    figs = obj["details"]["outputs"]["figures"]
    assert figs and all((tmp_path / "report_figures").joinpath(p.split("/")[-1]).exists() for p in figs)
    assert run(capsys, "bench", "--methods", "clingo", files)[0] == 1


def test_module_entry_point(files):
    p = subprocess.run([sys.executable, "-m", "mmcount", "bruteforce", str(files / "guarded.cnf")],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["count"] == 3
    assert "BruteForce" in p.stderr
