import json
import shutil
import subprocess

import pytest

from distconform import report
from distconform.cli import main


@pytest.fixture
def files(data_dir):
    return lambda name: str(data_dir / "fixtures" / name)


def test_weak_passes(files, capsys):
    assert main(["check-weak", files("N1.fsm"), files("M1.fsm")]) == 0
    assert "port 2: pass" in capsys.readouterr().out


def test_strong_fails_with_counterexample(files, capsys):
    assert main(["check-strong", files("N1.fsm"), files("M1.fsm"), "--k", "1"]) == 1
    assert "x1 / (y1, y2')" in capsys.readouterr().out


def test_report_and_figure_are_deterministic(files, tmp_path):
    outs = []
    for i in range(2):
        rep, fig = tmp_path / f"r{i}.json", tmp_path / f"f{i}.png"
        main(["check-strong", files("N1.fsm"), files("M1.fsm"), "--k", "2",
              "--report", str(rep), "--figure", str(fig)])
        outs.append((rep.read_bytes(), fig.read_bytes()))
    assert outs[0] == outs[1]
    doc = json.loads(outs[0][0])
    report.validate(doc)
    assert doc["verdict"] == "fail" and doc["projections"]["2"] == ["y2'"]
    assert outs[0][1].startswith(b"\x89PNG")


def test_weak_report_has_ports(files, tmp_path):
    rep = tmp_path / "w.json"
    assert main(["check-weak", files("M1.fsm"), files("N1.fsm"), "--report", str(rep)]) == 1
    doc = json.loads(rep.read_text())
    assert [p["verdict"] for p in doc["per_port"]] == ["fail", "fail"]


def test_member_and_projection(files, capsys):
    assert main(["member", files("nonprefix.tr"), files("nonprefix.fsm")]) == 0
    assert main(["member", files("nonprefix.tr"), files("nonprefix.fsm"), "--pc"]) == 1
    capsys.readouterr()
    assert main(["project", files("nonprefix.tr"), files("nonprefix.fsm"), "--port", "1"]) == 0
    assert capsys.readouterr().out.strip() == "x1 y1 x1 y1"
    assert main(["project", files("nonprefix.tr"), files("nonprefix.fsm"), "--port", "5"]) == 2


def test_exit_codes(files, data_dir, tmp_path):
    assert main(["check-strong", files("M7_prime.fsm"), files("M7.fsm"), "--exact"]) == 3
    assert main(["check-strong", files("N1.fsm"), files("M1.fsm"), "--exact"]) == 1
    assert main(["check-weak", str(data_dir / "errors" / "arity.fsm"), files("M1.fsm")]) == 2
    assert main(["check-weak", files("M4.fsm"), files("M1.fsm")]) == 2
    partial = tmp_path / "partial.fsm"
    partial.write_text("ports 2\ninputs 1: x1\ninputs 2: x2\noutputs 1: y1\noutputs 2: y2 y2'\n"
                       "states s0\ninitial s0\ntrans s0 x1 / (y1, -) -> s0\n")
    assert main(["check-strong", str(partial), files("M7.fsm"), "--k", "2"]) == 3
    assert main(["check-strong", str(partial), files("M7.fsm"), "--k", "2",
                 "--complete", "self-loop-null"]) in (0, 1)


def test_budget_exit_code(files, monkeypatch):
    monkeypatch.setenv("DISTCONFORM_MAX_CLASSES", "2")
    assert main(["check-strong", files("M4.fsm"), files("M4.fsm"), "--k", "4"]) == 4


def test_gadget_generation(files, tmp_path):
    out = tmp_path / "sat"
    assert main(["gen-sat", files("sat_unsatisfiable.sat"), "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["expected_verdict"] == "fail"
    assert main(["check-strong", str(out / "N.fsm"), str(out / "M.fsm"),
                 "--k", str(manifest["bound"])]) == 1
    out = tmp_path / "pcp"
    assert main(["gen-pcp", files("pcp_unsolvable.pcp"), "--out", str(out), "--max-indices", "4"]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["expected_verdict"] == "pass" and manifest["bound"] == 10
    assert main(["check-strong", str(out / "N.fsm"), str(out / "M.fsm"), "--k", "10"]) == 0


def test_witness_and_info(files, tmp_path, capsys):
    out = tmp_path / "w.fsm"
    assert main(["witness", files("M7.fsm"), files("m7_interleaved.tr"), "--out", str(out)]) == 0
    assert main(["check-strong", str(out), files("M7.fsm"), "--k", "4"]) == 0
    assert main(["witness", files("nonprefix.fsm"), files("nonprefix.tr")]) == 3
    capsys.readouterr()
    assert main(["info", files("M1.fsm")]) == 0
    assert "deterministic: no" in capsys.readouterr().out


def test_distinguish(files, tmp_path):
    rep = tmp_path / "d.json"
    assert main(["distinguish", files("N1.fsm"), files("M1.fsm"), "--k", "1", "--report", str(rep)]) == 1
    report.validate(json.loads(rep.read_text()))
    assert main(["distinguish", files("M4.fsm"), files("M4.fsm"), "--k", "2"]) == 0


@pytest.mark.skipif(shutil.which("distconform") is None, reason="console script not installed")
def test_console_script(files):
    res = subprocess.run(["distconform", "check-strong", files("N1.fsm"), files("M1.fsm"), "--k", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 1
