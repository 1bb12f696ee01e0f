import json
from pathlib import Path

import pytest

from qcm.demo import DEMO_SCENARIO
from qcm.errors import ParseError, UnresolvedReference
from qcm.scenario import encode, parse_complex, parse_matrix, run_scenario, run_scenario_doc

ROOT = Path(__file__).resolve().parent.parent

NORM_HALF = {
    "name": "norm half",
    "spaces": {"S": {"weights": [1, 1]}, "S2": {"weights": [2, 2]}},
    "maps": {"id": {"source": "S", "target": "S2", "mapping": [1, 2]}},
    "tasks": [{"op": "map_norm", "map": "id", "expect": 0.5}],
}


def write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


def test_norm_half_passes(tmp_path):
    report = run_scenario(write(tmp_path, NORM_HALF))
    assert report.ok and report.tasks[0]["outputs"]["value"] == 0.5


def test_wrong_expectation_fails():
    doc = dict(NORM_HALF, tasks=[{"op": "map_norm", "map": "id", "expect": 2}])
    report = run_scenario_doc(doc)
    assert not report.ok and report.failed == 1


def test_undeclared_reference():
    doc = dict(NORM_HALF, tasks=[{"op": "map_norm", "map": "missing"}])
    with pytest.raises(UnresolvedReference):
        run_scenario_doc(doc)
    doc = dict(NORM_HALF, maps={"id": {"source": "S", "target": "T", "mapping": [1, 2]}})
    with pytest.raises(UnresolvedReference):
        run_scenario_doc(doc)


def test_malformed_files(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        run_scenario(p)
    with pytest.raises(ParseError):
        run_scenario(tmp_path / "absent.json")
    with pytest.raises(ParseError):
        run_scenario_doc([1, 2])
    with pytest.raises(ParseError):
        run_scenario_doc({"tasks": [{"op": "frobnicate"}]})
    with pytest.raises(ParseError):
        run_scenario_doc({"tasks": [{"map": "x"}]})
    with pytest.raises(ParseError):
        run_scenario_doc({"spaces": {"S": {"weights": [-1]}}})
    with pytest.raises(ParseError):
        run_scenario_doc({"algebras": {"A": {"kind": "octonions"}}})


def test_improper_ideal_is_a_failed_task_not_an_abort():
    doc = {
        "algebras": {"M2": {"kind": "matrix", "n": 2}},
        "measures": {"tr": {"algebra": "M2", "kind": "trace"}},
        "tasks": [
            {"op": "condition", "measure": "tr", "ideal_generators": [[0, 1, 0, 0]]},
            {"op": "is_simple", "algebra": "M2", "expect": True},
        ],
    }
    report = run_scenario_doc(doc)
    first, second = report.tasks
    assert first["status"] == "fail" and first["error"]["type"] == "ImproperIdeal"
    assert second["status"] == "pass"
    assert not report.ok


def test_expect_error_passes_only_on_that_error():
    base = {"algebras": {"M2": {"kind": "matrix", "n": 2}},
            "measures": {"tr": {"algebra": "M2", "kind": "trace"}}}
    ok = run_scenario_doc(dict(base, tasks=[{"op": "condition", "measure": "tr",
                                             "ideal_generators": [[1, 0, 0, 0]], "expect_error": "ImproperIdeal"}]))
    assert ok.ok
    wrong = run_scenario_doc(dict(base, tasks=[{"op": "is_simple", "algebra": "M2", "expect_error": "ImproperIdeal"}]))
    assert not wrong.ok


def test_isolation_of_failures():
    tasks = [{"op": "map_norm", "map": "id", "expect": 0.5}]
    alone = run_scenario_doc(dict(NORM_HALF, tasks=tasks)).tasks[0]
    after = run_scenario_doc(dict(NORM_HALF, tasks=[{"op": "map_norm", "map": "id", "expect": 3}] + tasks)).tasks[1]
    assert {k: v for k, v in alone.items() if k != "index"} == {k: v for k, v in after.items() if k != "index"}


def test_report_is_deterministic_and_parallel_safe():
    a = json.dumps(run_scenario_doc(DEMO_SCENARIO, seed=5).to_dict())
    b = json.dumps(run_scenario_doc(DEMO_SCENARIO, seed=5).to_dict())
    c = json.dumps(run_scenario_doc(DEMO_SCENARIO, seed=5, jobs=4).to_dict())
    assert a == b == c


def test_demo_scenario_passes():
    report = run_scenario_doc(DEMO_SCENARIO)
    assert report.ok, [t for t in report.tasks if t["status"] != "pass"]


def test_shipped_scenarios():
    results = {p.name: run_scenario(p) for p in sorted((ROOT / "scenarios").glob("*.json"))}
    assert results["worked_examples.json"].ok
    assert results["block_conditioning.json"].ok
    assert results["commutative_duality.json"].ok
    barrier = results["simplicity_barrier.json"]
    assert barrier.failed == 1 and barrier.tasks[-1]["error"]["type"] == "ImproperIdeal"


def test_complex_and_unbounded_encoding():
    assert parse_complex([1, 2]) == 1 + 2j
    assert parse_complex(3) == 3
    with pytest.raises(ParseError):
        parse_complex("x")
    with pytest.raises(ParseError):
        parse_matrix([[1, 2], [3]])
    assert encode(float("inf")) == "unbounded"
    assert encode(1 + 2j) == [1.0, 2.0]
    assert encode(complex(0.5, 0)) == 0.5


def test_points_and_dict_mappings():
    doc = {
        "spaces": {"P": {"weights": [1, 1], "points": ["a", "b"]}, "Q": {"weights": [2], "points": ["z"]}},
        "maps": {"m": {"source": "P", "target": "Q", "mapping": {"a": "z", "b": "z"}}},
        "tasks": [{"op": "map_norm", "map": "m", "expect": 1},
                  {"op": "is_measure_preserving", "map": "m", "expect": True}],
    }
    assert run_scenario_doc(doc).ok


def test_seed_precedence():
    doc = dict(NORM_HALF, seed=4)
    assert run_scenario_doc(doc).seed == 4
    assert run_scenario_doc(doc, seed=9).seed == 9
    assert run_scenario_doc(NORM_HALF, default_seed=6).seed == 6
