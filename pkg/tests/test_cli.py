import json
import subprocess
import sys
from pathlib import Path

from qcm.cli import main

ROOT = Path(__file__).resolve().parent.parent
SCENARIOS = ROOT / "scenarios"


def test_demo_passes(capsys):
    assert main(["demo"]) == 0
    out = capsys.readouterr().out
    assert "18/18 tasks passed" in out and "FAIL" not in out


def test_check_json_output(capsys):
    assert main(["check", str(SCENARIOS / "worked_examples.json"), "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["summary"]["failed"] == 0
    assert report["tasks"][0]["outputs"]["value"] == 0.5


def test_global_flags_before_subcommand(capsys):
    assert main(["--format", "json", "--tol", "1e-10", "demo"]) == 0
    assert json.loads(capsys.readouterr().out)["summary"]["passed"] == 18


def test_task_failure_exit_code(capsys):
    assert main(["check", str(SCENARIOS / "simplicity_barrier.json")]) == 1
    assert "ImproperIdeal" in capsys.readouterr().out


def test_usage_and_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[")
    assert main(["check", str(bad)]) == 2
    unresolved = tmp_path / "ref.json"
    unresolved.write_text(json.dumps({"tasks": [{"op": "map_norm", "map": "nope"}]}))
    assert main(["check", str(unresolved)]) == 2
    assert main(["prop", "nope"]) == 2
    assert main(["prop", "gns", "--cases", "0"]) == 2
    assert main(["frobnicate"]) == 2
    assert main([]) == 2
    capsys.readouterr()


def test_prop_runs_and_respects_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("QCM_SEED", "13")
    assert main(["prop", "bayes", "--cases", "10", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["seed"] == 13 and payload["ok"]
    assert main(["prop", "bayes", "--cases", "10", "--seed", "2", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 2
    monkeypatch.setenv("QCM_SEED", "abc")
    assert main(["prop", "bayes", "--cases", "5"]) == 2


def test_check_output_is_byte_identical(capsys):
    path = str(SCENARIOS / "commutative_duality.json")
    main(["check", path, "--format", "json"])
    first = capsys.readouterr().out
    main(["check", path, "--format", "json", "--jobs", "3"])
    assert capsys.readouterr().out == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qcm", "demo"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "tasks passed" in proc.stdout
