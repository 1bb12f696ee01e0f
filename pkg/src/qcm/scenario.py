"""Scenario files: declarations plus a list of tasks, executed into a report.

A scenario is a UTF-8 JSON object (see ``docs/scenario_schema.md``)::

    {
      "name": "norm examples",
      "seed": 7,
      "tolerances": {"tol": 1e-9},
      "spaces":   {"S": {"weights": [1, 1]}, "S2": {"weights": [2, 2]}},
      "maps":     {"id": {"source": "S", "target": "S2", "mapping": [1, 2]}},
      "algebras": {"A": {"kind": "function", "n": 3}},
      "measures": {"phi": {"algebra": "A", "coefficients": [0.2, 0.3, 0.5]}},
      "ideals":   {"I": {"algebra": "A", "generators": [[0, 0, 1]]}},
      "tasks": [{"op": "map_norm", "map": "id", "expect": 0.5}]
    }

Complex numbers are ``[re, im]`` pairs, matrices are row-major nested lists,
and an unbounded norm is the string ``"unbounded"``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from qcm.algebra import (StarAlgebra, direct_sum, function_algebra, ideal_closure, identity_hom, is_simple,
                         matrix_algebra, subalgebra_from_generators)
from qcm.classical import (FiniteMeasureSpace, MeasurableMap, conditional_space, is_measure_preserving, map_norm,
                           map_norm_bruteforce, normalization_norm_check, normalize_space)
from qcm.duality import (conditional_duality_check, conditional_expectation_check, norm_agreement, norms_agree,
                         rmk_measure, round_trip_classical, spectrum)
from qcm.errors import ParseError, QcmError, UnresolvedReference
from qcm.gns import bayes_analog, conditional_measure, gns
from qcm.linalg import DEFAULT_TOL
from qcm.measure import (QuantumMeasure, density_measure, hom_norm, is_positive, is_state, normalize_measure,
                         vector_measure)

UNBOUNDED_TOKEN = "unbounded"


# -- JSON <-> numbers ----------------------------------------------------------

def parse_complex(x) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(x[0], x[1])
    raise ParseError(f"not a number or [re, im] pair: {x!r}")


def parse_vector(v) -> np.ndarray:
    if not isinstance(v, list):
        raise ParseError(f"expected a list of numbers, got {v!r}")
    return np.array([parse_complex(t) for t in v], dtype=complex)


def parse_matrix(m) -> np.ndarray:
    if not isinstance(m, list) or not m:
        raise ParseError(f"expected a non-empty row-major matrix, got {m!r}")
    rows = [parse_vector(r) for r in m]
    if len({len(r) for r in rows}) != 1:
        raise ParseError("matrix rows have different lengths")
    return np.array(rows)


def encode(value):
    """Convert outputs to JSON-safe values (complex -> [re, im], inf -> "unbounded")."""
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, np.ndarray):
        return [encode(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        if abs(value.imag) <= 1e-15 * max(1.0, abs(value.real)):
            return encode(value.real)
        return [encode(value.real), encode(value.imag)]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return UNBOUNDED_TOKEN
        return value
    return value


# -- declarations ----------------------------------------------------------------

@dataclass
class Declarations:
    spaces: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    algebras: dict = field(default_factory=dict)
    measures: dict = field(default_factory=dict)
    ideals: dict = field(default_factory=dict)

    def get(self, kind: str, ident):
        table = getattr(self, kind)
        if not isinstance(ident, str) or ident not in table:
            raise UnresolvedReference(f"undeclared {kind[:-1]} {ident!r}")
        return table[ident]


def _point_lookup(space: FiniteMeasureSpace, label):
    for p in space.points:
        if p == label or str(p) == str(label):
            return p
    raise ParseError(f"{label!r} is not a point of the space")


def _build_space(entry) -> FiniteMeasureSpace:
    if not isinstance(entry, dict) or "weights" not in entry:
        raise ParseError(f"space needs 'weights': {entry!r}")
    w = [float(x) for x in entry["weights"]]
    labels = entry.get("points")
    try:
        return FiniteMeasureSpace.from_weights(w, labels)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _build_algebra(entry, decl: Declarations) -> StarAlgebra:
    if isinstance(entry, str):
        return decl.get("algebras", entry)
    if not isinstance(entry, dict):
        raise ParseError(f"bad algebra entry {entry!r}")
    kind = entry.get("kind")
    if kind == "function":
        return function_algebra(int(entry["n"]))
    if kind == "matrix":
        return matrix_algebra(int(entry["n"]))
    if kind == "generators":
        n = int(entry["n"])
        return subalgebra_from_generators(n, [parse_matrix(m) for m in entry.get("matrices", [])])
    if kind == "direct_sum":
        parts = [_build_algebra(p, decl) for p in entry.get("summands", [])]
        if len(parts) < 2:
            raise ParseError("direct_sum needs at least two summands")
        out = parts[0]
        for p in parts[1:]:
            out = direct_sum(out, p)
        return out
    if kind == "space":
        return function_algebra(len(decl.get("spaces", entry["space"])))
    raise ParseError(f"unknown algebra kind {kind!r}")


def _build_measure(entry, decl: Declarations) -> QuantumMeasure:
    a = decl.get("algebras", entry.get("algebra"))
    kind = entry.get("kind", "coefficients")
    if kind == "coefficients":
        return QuantumMeasure(a, parse_vector(entry["coefficients"]))
    if kind == "trace":
        if a.rep is None:
            raise ParseError("trace measure needs a concrete representation")
        return density_measure(a, np.eye(a.rep_dim))
    if kind == "vector":
        return vector_measure(a, parse_vector(entry["h"]))
    if kind == "density":
        return density_measure(a, parse_matrix(entry["rho"]))
    if kind == "space":
        s = decl.get("spaces", entry["space"])
        if len(s) != a.dim:
            raise ParseError("space and algebra sizes differ")
        return QuantumMeasure(a, s.weights.astype(complex))
    raise ParseError(f"unknown measure kind {kind!r}")


def _build_map(entry, decl: Declarations) -> MeasurableMap:
    src = decl.get("spaces", entry.get("source"))
    tgt = decl.get("spaces", entry.get("target"))
    mapping = entry.get("mapping")
    if isinstance(mapping, list):
        if len(mapping) != len(src):
            raise ParseError("mapping list must give one image per source point")
        pairs = zip(src.points, mapping)
    elif isinstance(mapping, dict):
        pairs = ((_point_lookup(src, k), v) for k, v in mapping.items())
    else:
        raise ParseError(f"bad mapping {mapping!r}")
    return MeasurableMap(src, tgt, {p: _point_lookup(tgt, y) for p, y in pairs})


def build_declarations(doc: dict) -> Declarations:
    decl = Declarations()
    try:
        for k, v in doc.get("spaces", {}).items():
            decl.spaces[k] = _build_space(v)
        for k, v in doc.get("maps", {}).items():
            decl.maps[k] = _build_map(v, decl)
        for k, v in doc.get("algebras", {}).items():
            decl.algebras[k] = _build_algebra(v, decl)
        for k, v in doc.get("measures", {}).items():
            decl.measures[k] = _build_measure(v, decl)
        for k, v in doc.get("ideals", {}).items():
            a = decl.get("algebras", v.get("algebra"))
            decl.ideals[k] = ideal_closure(a, [parse_vector(g) for g in v.get("generators", [])])
    except UnresolvedReference:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed declaration: {exc}") from exc
    except QcmError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"invalid declaration: {type(exc).__name__}: {exc}") from exc
    return decl


# -- task execution ----------------------------------------------------------------

REFERENCE_FIELDS = {
    "map": "maps", "space": "spaces", "algebra": "algebras", "measure": "measures",
    "target_measure": "measures", "ideal": "ideals",
}


def _resolve_ideal(task, decl, a):
    if "ideal" in task:
        return decl.get("ideals", task["ideal"])
    return ideal_closure(a, [parse_vector(g) for g in task.get("ideal_generators", [])])


def _element_n(task, key, n: int) -> np.ndarray:
    v = parse_vector(task[key])
    if v.shape[0] != n:
        raise ParseError(f"{key} has {v.shape[0]} coordinates, expected {n}")
    return v


def _element(task, key, a: StarAlgebra) -> np.ndarray:
    return _element_n(task, key, a.dim)


def _op_map_norm(t, d, tol, seed):
    return {"value": map_norm(d.get("maps", t["map"]))}


def _op_map_norm_bruteforce(t, d, tol, seed):
    return {"value": map_norm_bruteforce(d.get("maps", t["map"]))}


def _op_is_measure_preserving(t, d, tol, seed):
    return {"value": is_measure_preserving(d.get("maps", t["map"]), tol)}


def _op_normalize_space(t, d, tol, seed):
    return {"value": normalize_space(d.get("spaces", t["space"])).weights}


def _op_conditional_space(t, d, tol, seed):
    s = d.get("spaces", t["space"])
    sub, inc = conditional_space(s, [_point_lookup(s, p) for p in t["subset"]])
    return {"value": sub.weights, "inclusion_norm": map_norm(inc)}


def _op_inclusion_norm(t, d, tol, seed):
    s = d.get("spaces", t["space"])
    _, inc = conditional_space(s, [_point_lookup(s, p) for p in t["subset"]])
    return {"value": map_norm(inc)}


def _op_normalization_norm_check(t, d, tol, seed):
    lhs, rhs = normalization_norm_check(d.get("maps", t["map"]))
    r = abs(lhs - rhs)
    return {"value": lhs, "rhs": rhs, "_residuals": {"normalization": r},
            "_checks": {"normalization": r <= 1e-12 * max(1.0, rhs)}}


def _op_norm_agreement(t, d, tol, seed):
    c, q = norm_agreement(d.get("maps", t["map"]), tol)
    return {"value": c, "classical": c, "quantum": q, "_checks": {"agree": norms_agree(c, q, tol)}}


def _op_evaluate(t, d, tol, seed):
    phi = d.get("measures", t["measure"])
    return {"value": phi(_element(t, "element", phi.algebra))}


def _op_is_positive(t, d, tol, seed):
    return {"value": is_positive(d.get("measures", t["measure"]), tol)}


def _op_is_state(t, d, tol, seed):
    return {"value": is_state(d.get("measures", t["measure"]), tol)}


def _op_normalize_measure(t, d, tol, seed):
    return {"value": normalize_measure(d.get("measures", t["measure"]), tol).coeffs}


def _op_hom_norm(t, d, tol, seed):
    # identity homomorphism between two functionals on the same algebra
    phi = d.get("measures", t["measure"])
    psi = d.get("measures", t["target_measure"])
    return {"value": hom_norm(identity_hom(phi.algebra), phi, psi, tol)}


def _op_is_simple(t, d, tol, seed):
    return {"value": is_simple(d.get("algebras", t["algebra"]))}


def _op_ideal_closure(t, d, tol, seed):
    a = d.get("algebras", t["algebra"])
    ideal = ideal_closure(a, [parse_vector(g) for g in t.get("generators", [])])
    return {"value": ideal.dim, "algebra_dim": a.dim, "proper": ideal.is_proper()}


def _op_gns(t, d, tol, seed):
    phi = d.get("measures", t["measure"])
    g = gns(phi.algebra, phi, tol)
    res = g.invariant_residuals()
    return {"value": g.rank, "cyclic": g.cyclic, "_residuals": res,
            "_checks": {k: v <= 1e-9 for k, v in res.items()}}


def _op_condition(t, d, tol, seed):
    phi = d.get("measures", t["measure"])
    a = phi.algebra
    cond = conditional_measure(a, phi, _resolve_ideal(t, d, a), tol)
    diag = cond.diagnostics
    expected_norm = 0.0 if cond.degenerate else 1.0
    out = {"value": cond.value(a.unit), "coefficients": cond.measure.coeffs,
           "quotient_dim": cond.algebra.dim, "diagnostics": diag,
           "_residuals": {"well_defined": diag["well_defined_residual"],
                          "projection_norm": abs(diag["projection_norm"] - expected_norm)},
           "_checks": {"positive": diag["positive"], "well_defined": diag["well_defined_residual"] <= 1e-9,
                       "norm_dichotomy": abs(diag["projection_norm"] - expected_norm) <= 1e-9}}
    if "elements" in t:
        out["values"] = [cond.value(parse_vector(x)) for x in t["elements"]]
    return out


def _op_conditional_expectation(t, d, tol, seed):
    s = d.get("spaces", t["space"])
    lhs, rhs = conditional_expectation_check(s, [_point_lookup(s, p) for p in t["subset"]],
                                             _element_n(t, "element", len(s)), tol)
    r = abs(lhs - rhs)
    return {"value": lhs, "rhs": rhs, "_residuals": {"expectation": r},
            "_checks": {"expectation": r <= 1e-9 * max(1.0, abs(rhs))}}


def _op_bayes(t, d, tol, seed):
    phi = d.get("measures", t["measure"])
    a = phi.algebra
    rec = bayes_analog(a, phi, _resolve_ideal(t, d, a), _element(t, "x", a), tol)
    return {"value": rec.cond_state_value, "ratio": rec.ratio, "reconstructed": rec.reconstructed,
            "_residuals": {"bayes": rec.residual}, "_checks": {"bayes": rec.residual <= 1e-12}}


def _op_spectrum(t, d, tol, seed):
    a = d.get("algebras", t["algebra"])
    spec = spectrum(a, seed)
    res = spec.invariant_residuals()
    return {"value": spec.size, "characters": spec.characters, "_residuals": res,
            "_checks": {k: v <= 1e-8 for k, v in res.items()}}


def _op_rmk(t, d, tol, seed):
    phi = d.get("measures", t["measure"])
    rmk = rmk_measure(phi.algebra, phi, seed, tol)
    return {"value": rmk.space.weights, "_residuals": {"measure": rmk.measure_residual},
            "_checks": {"measure_preserving": rmk.measure_residual <= 1e-9}}


def _op_round_trip(t, d, tol, seed):
    rt = round_trip_classical(d.get("spaces", t["space"]), seed)
    return {"value": list(rt.recovered), "original": list(rt.original),
            "_residuals": {"weights": max(rt.max_weight_error, rt.multiset_error)}, "_checks": {"weights": rt.ok}}


def _op_conditional_duality(t, d, tol, seed):
    phi = d.get("measures", t["measure"])
    a = phi.algebra
    rep = conditional_duality_check(a, phi, _resolve_ideal(t, d, a), seed, tol)
    return {"value": list(rep.conditional_masses), "surviving": list(rep.surviving),
            "quotient_dim": rep.quotient_dim, "_residuals": {"value": rep.value_residual},
            "_checks": {"duality": rep.ok}}


OPS = {
    "map_norm": _op_map_norm,
    "map_norm_bruteforce": _op_map_norm_bruteforce,
    "is_measure_preserving": _op_is_measure_preserving,
    "normalize_space": _op_normalize_space,
    "conditional_space": _op_conditional_space,
    "inclusion_norm": _op_inclusion_norm,
    "normalization_norm_check": _op_normalization_norm_check,
    "norm_agreement": _op_norm_agreement,
    "evaluate": _op_evaluate,
    "is_positive": _op_is_positive,
    "is_state": _op_is_state,
    "normalize_measure": _op_normalize_measure,
    "hom_norm": _op_hom_norm,
    "is_simple": _op_is_simple,
    "ideal_closure": _op_ideal_closure,
    "gns": _op_gns,
    "condition": _op_condition,
    "conditional_expectation": _op_conditional_expectation,
    "bayes": _op_bayes,
    "spectrum": _op_spectrum,
    "rmk": _op_rmk,
    "round_trip": _op_round_trip,
    "conditional_duality": _op_conditional_duality,
}


def _matches(actual, expected, tol: float) -> bool:
    if expected == UNBOUNDED_TOKEN:
        return isinstance(actual, float) and math.isinf(actual)
    if isinstance(expected, bool) or isinstance(actual, (bool, np.bool_)):
        return bool(actual) == expected if isinstance(expected, bool) else False
    if isinstance(actual, (list, tuple, np.ndarray)):
        exp = list(expected) if isinstance(expected, list) else None
        act = list(actual)
        if exp is None or len(exp) != len(act):
            return False
        # a 2-list against a scalar-like entry means [re, im]
        return all(_matches(x, y, tol) for x, y in zip(act, exp))
    try:
        a = complex(actual)
        e = parse_complex(expected)
    except (TypeError, ValueError, ParseError):
        return actual == expected
    if math.isinf(abs(a)):
        return False
    return abs(a - e) <= tol * max(1.0, abs(e))


def validate_references(doc: dict) -> None:
    """Fail fast on task references to undeclared ids."""
    tables = {k: set(doc.get(k, {})) for k in ("spaces", "maps", "algebras", "measures", "ideals")}
    for i, task in enumerate(doc.get("tasks", [])):
        if not isinstance(task, dict) or "op" not in task:
            raise ParseError(f"task {i} needs an 'op'")
        if task["op"] not in OPS:
            raise ParseError(f"task {i}: unknown op {task['op']!r}")
        for key, table in REFERENCE_FIELDS.items():
            if key in task and task[key] not in tables[table]:
                raise UnresolvedReference(f"task {i} ({task['op']}): undeclared {table[:-1]} {task[key]!r}")


def run_task(index: int, task: dict, decl: Declarations, tol: float, seed: int) -> dict:
    task_tol = float(task.get("tol", tol))
    entry = {"index": index, "op": task["op"],
             "inputs": {k: v for k, v in task.items() if k not in ("op", "expect", "expect_error")}}
    try:
        out = OPS[task["op"]](task, decl, task_tol, seed)
    except (QcmError, KeyError, TypeError, ValueError) as exc:
        name = type(exc).__name__
        entry["error"] = {"type": name, "message": str(exc)}
        expected_error = task.get("expect_error")
        entry["status"] = "pass" if expected_error == name else "fail"
        if expected_error is not None:
            entry["expect_error"] = expected_error
        return entry
    checks = out.pop("_checks", {})
    residuals = out.pop("_residuals", {})
    entry["outputs"] = encode(out)
    entry["residuals"] = encode(residuals)
    entry["checks"] = encode(checks)
    ok = all(checks.values())
    if "expect" in task:
        entry["expect"] = task["expect"]
        ok = ok and _matches(out["value"], task["expect"], task_tol)
    if "expect_error" in task:
        entry["expect_error"] = task["expect_error"]
        ok = False
    entry["status"] = "pass" if ok else "fail"
    return entry


@dataclass
class Report:
    name: str
    seed: int
    tasks: list

    @property
    def passed(self) -> int:
        return sum(t["status"] == "pass" for t in self.tasks)

    @property
    def failed(self) -> int:
        return len(self.tasks) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def max_residuals(self) -> dict:
        out: dict = {}
        for t in self.tasks:
            for k, v in t.get("residuals", {}).items():
                if isinstance(v, (int, float)):
                    out[k] = max(out.get(k, 0.0), float(v))
        return dict(sorted(out.items()))

    def to_dict(self) -> dict:
        return {"scenario": self.name, "seed": self.seed, "tasks": self.tasks,
                "summary": {"total": len(self.tasks), "passed": self.passed, "failed": self.failed,
                            "max_residuals": self.max_residuals(), "seed": self.seed}}


def run_scenario_doc(doc: dict, seed: int | None = None, tol: float | None = None, jobs: int = 1,
                     default_seed: int = 0) -> Report:
    """Execute every task in declaration order.

    Seed precedence: ``seed`` argument, then the scenario's ``"seed"``, then ``default_seed``.
    With ``jobs > 1`` tasks run on a thread pool; the report order is unchanged.
    """
    if not isinstance(doc, dict):
        raise ParseError("scenario must be a JSON object")
    validate_references(doc)
    decl = build_declarations(doc)
    seed = int(doc.get("seed", default_seed) if seed is None else seed)
    if tol is None:
        tol = float(doc.get("tolerances", {}).get("tol", DEFAULT_TOL))
    tasks = doc.get("tasks", [])
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(lambda it: run_task(it[0], it[1], decl, tol, seed), enumerate(tasks)))
    else:
        entries = [run_task(i, t, decl, tol, seed) for i, t in enumerate(tasks)]
    return Report(str(doc.get("name", "scenario")), seed, entries)


def load_scenario(path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def run_scenario(path, seed: int | None = None, tol: float | None = None, jobs: int = 1,
                 default_seed: int = 0) -> Report:
    return run_scenario_doc(load_scenario(path), seed, tol, jobs, default_seed)
