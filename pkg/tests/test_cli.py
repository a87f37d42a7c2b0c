import json
import subprocess
import sys
from pathlib import Path

import pytest

from mvnerve.cli import main

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_prop_star_triangle(capsys):
    code, report = run(capsys, "verify", "prop-star", FIX / "triangle.json", "--ring", "Q")
    assert code == 0 and report["passed"] and report["schema"] == 1


def test_betti_rp2_mod2(capsys):
    code, report = run(capsys, "betti", FIX / "rp2.json", "--ring", "Zp:2")
    assert code == 0 and report["data"]["ranks"] == [1, 1, 1]
    code, report = run(capsys, "betti", FIX / "rp2.json", "--ring", "Z", "--degree", "2")
    assert report["data"] == {"ranks": [0], "torsion": [[2]]}


def test_nerve_hexagon(capsys):
    code, report = run(capsys, "nerve", FIX / "hexagon.json", FIX / "cover_ab.json")
    assert code == 0
    assert report["data"] == {"vertices": ["a", "b"], "facets": [["a", "b"]]}


def test_eta_and_fstar(capsys):
    for cmd in ("eta", "fstar"):
        code, report = run(capsys, cmd, FIX / "rp2.json", FIX / "cover_star_rp2.json", "--ring", "Zp:2")
        assert code == 0
        assert [d["degree"] for d in report["data"]["degrees"]] == [0, 1, 2]
        assert all(len(d["representatives"]) == 1 for d in report["data"]["degrees"])


def test_verify_main_and_naturality(capsys):
    code, report = run(capsys, "verify", "main", FIX / "hexagon.json", FIX / "cover_abc.json", "--ring", "Z")
    assert code == 0 and report["pipeline"] == "main"
    for spec in ("naturality_inclusion.json", "naturality_refinement.json"):
        code, report = run(capsys, "verify", "naturality", FIX / spec)
        assert code == 0, report


def test_timings_flag(capsys):
    _, plain = run(capsys, "verify", "prop-star", FIX / "triangle.json")
    _, timed = run(capsys, "--timings", "verify", "prop-star", FIX / "triangle.json")
    assert "timings" not in plain and "timings" in timed


def test_malformed_json_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    code, report = run(capsys, "betti", bad)
    assert code == 2 and report["error"]["kind"] == "malformed-input"
    code, _ = run(capsys, "betti", tmp_path / "missing.json")
    assert code == 2
    bad.write_text('{"vertices": [0]}')
    assert run(capsys, "betti", bad)[0] == 2


def test_precondition_exit_3(capsys, tmp_path):
    spec = json.loads((FIX / "naturality_refinement.json").read_text())
    spec["cover_source"], spec["cover_target"] = spec["cover_target"], spec["cover_source"]
    path = tmp_path / "swapped.json"
    path.write_text(json.dumps(spec))
    code, report = run(capsys, "verify", "naturality", path)
    assert code == 3 and report["error"]["kind"] == "precondition"
    uncovered = tmp_path / "uncovered.json"
    uncovered.write_text('{"sets": {"a": [0, 1]}}')
    assert run(capsys, "nerve", FIX / "hexagon.json", uncovered)[0] == 3


def test_check_failure_exit_1(capsys, monkeypatch):
    from mvnerve import cli
    from mvnerve.harness import ClassResult, DegreeResult, VerificationReport

    def failing(args):
        report = VerificationReport("main", "Q")
        report.degrees.append(DegreeResult(0, 1, [ClassResult(0, {"class_equal": False}, witness=[[[0], "1"]])]))
        return report

    monkeypatch.setattr(cli, "cmd_verify_prop_star", failing)
    code, report = run(capsys, "verify", "prop-star", FIX / "triangle.json")
    assert code == 1 and not report["passed"]


def test_bad_ring_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["betti", str(FIX / "rp2.json"), "--ring", "Zp:4"])
    assert exc.value.code == 2


def test_console_script_is_deterministic():
    argv = [sys.executable, "-m", "mvnerve.cli", "verify", "main", str(FIX / "rp2.json"), str(FIX / "cover_star_rp2.json"), "--ring", "Zp:3"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["passed"]
