from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from hopfforge import __version__
from hopfforge.cli import RunReport, main


def run_json(capsys, *argv):
    code = main([*argv, "--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def consistent(code, data):
    assert code == (1 if data["summary"]["fail"] else 0)
    assert data["tool"] == "hopfforge" and data["version"] == __version__


def test_fractions_enumerate(capsys):
    code, data = run_json(capsys, "fractions", "enumerate", "--m", "6")
    consistent(code, data)
    assert code == 0
    parts = sorted(tuple(f["parts"]) for f in data["output"]["fractions"])
    assert parts == [(1,), (2, 3), (3, 4), (5,)]


def test_fractions_validate_failure(capsys):
    code, data = run_json(capsys, "fractions", "validate", "--m", "6", "--parts", "2,2")
    consistent(code, data)
    assert code == 1
    text = json.dumps(data)
    assert '"first_failed": 2' in text
    assert "[2, 3, 4]" in text


def test_identities(capsys):
    code, data = run_json(capsys, "identities", "--m", "6", "--parts", "2,3")
    consistent(code, data)
    assert code == 0 and data["summary"]["pass"] == 18


def test_build_families(capsys):
    for argv in (["build", "taft", "--m", "3", "--parts", "1", "--t", "2"],
                 ["build", "liu", "--m", "6", "--parts", "2,3", "--omega", "1"],
                 ["build", "dfrac", "--m", "2", "--parts", "1", "--d", "2"]):
        code, data = run_json(capsys, *argv)
        consistent(code, data)
        assert code == 0, argv


def test_build_rejections(capsys):
    code, data = run_json(capsys, "build", "taft", "--m", "6", "--parts", "3,4", "--t", "2")
    consistent(code, data)
    assert code == 1
    code, data = run_json(capsys, "build", "dfrac", "--m", "2", "--parts", "1", "--d", "2",
                          "--bracket", "keep")
    consistent(code, data)
    assert code == 1


def test_quotient_dt(capsys):
    code, data = run_json(capsys, "quotient", "dt", "--m", "2", "--parts", "1", "--d", "6",
                          "--t", "3", "--verify")
    consistent(code, data)
    assert code == 0
    assert "24" in json.dumps(data["output"])


def test_quotient_csv(capsys, tmp_path):
    target = tmp_path / "table.csv"
    code = main(["quotient", "dbar", "--m", "2", "--parts", "1", "--d", "2", "--csv",
                 "--out", str(target)])
    assert code == 0
    rows = list(csv.reader(io.StringIO(target.read_text())))
    assert rows[0] == ["row", "col", "result", "scalar"]
    assert len(rows) > 16


def test_rep_profile(capsys):
    code, data = run_json(capsys, "rep", "profile", "--m", "3", "--parts", "1", "--d", "1")
    consistent(code, data)
    assert code == 0
    assert data["output"]["profile"] == {"1": 6, "2": 3}


def test_rep_fusion_sign_rules(capsys):
    base = ["rep", "fusion", "--m", "2", "--parts", "1", "--d", "2"]
    code, data = run_json(capsys, *base)
    consistent(code, data)
    assert code == 0
    code, data = run_json(capsys, *base, "--sign-rule", "literal")
    consistent(code, data)
    assert code == 1


def test_usage_errors(capsys):
    assert main(["rep", "profile", "--m", "2", "--parts", "1", "--d", "2",
                 "--gamma", "not-a-root"]) == 2
    assert main(["quotient", "nope"]) == 2
    assert main([]) == 2
    assert main(["fractions", "enumerate", "--m", "x"]) == 2
    assert "usage error" in capsys.readouterr().err


def test_text_output(capsys):
    code = main(["fractions", "validate", "--m", "6", "--parts", "2,3"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.splitlines()[-1].startswith("summary: ")


def test_report_round_trip(capsys, tmp_path):
    target = tmp_path / "r.json"
    main(["quotient", "taftfin", "--m", "3", "--parts", "1", "--verify", "--json",
          "--out", str(target)])
    data = json.loads(target.read_text())
    run = RunReport.from_json(data)
    assert run.to_json() == data
    assert run.exit_code == (1 if data["summary"]["fail"] else 0)
    assert run.command[:3] == ["hopfforge", "quotient", "taftfin"]


def test_suite_stops_on_injected_corruption(capsys):
    code, data = run_json(capsys, "suite", "quick", "--inject-corruption")
    consistent(code, data)
    assert code == 1
    assert data["data"]["stopped_after"] == 5
    assert all(c["name"].startswith("5/") for c in data["checks"] if c["status"] == "fail")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hopfforge.cli", "fractions", "validate",
                           "--m", "5", "--parts", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "summary" in proc.stdout
