"""Command line entry point: ``qcm check``, ``qcm prop`` and ``qcm demo``.

Exit codes: 0 when everything passes, 1 on task or check failures, 2 on
malformed input or usage errors.  ``QCM_SEED`` supplies the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from qcm.demo import DEMO_SCENARIO
from qcm.errors import ParseError, UnknownSuite, UnresolvedReference
from qcm.linalg import DEFAULT_TOL
from qcm.properties import SUITES, run_property_suite
from qcm.scenario import Report, encode, run_scenario, run_scenario_doc

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SEED_ENV = "QCM_SEED"


def env_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, list):
        return "[" + ", ".join(_fmt_value(x) for x in v) + "]"
    return str(v)


def format_report_text(report: Report) -> str:
    lines = [f"scenario: {report.name}  seed: {report.seed}"]
    for t in report.tasks:
        status = "PASS" if t["status"] == "pass" else "FAIL"
        if "error" in t:
            detail = f"error {t['error']['type']}: {t['error']['message']}"
        else:
            detail = f"value {_fmt_value(t['outputs'].get('value'))}"
            failed = [k for k, ok in t.get("checks", {}).items() if not ok]
            if failed:
                detail += f"  failed checks: {', '.join(failed)}"
        if "expect" in t:
            detail += f"  (expected {_fmt_value(t['expect'])})"
        elif "expect_error" in t:
            detail += f"  (expected error {t['expect_error']})"
        lines.append(f"{status} [{t['index']:>2}] {t['op']:<26} {detail}")
    lines.append(f"{report.passed}/{len(report.tasks)} tasks passed")
    return "\n".join(lines)


def format_suites_text(results) -> str:
    lines = []
    for r in results:
        lines.append(f"suite {r.suite}  cases {r.cases}  seed {r.seed}  {'PASS' if r.ok else 'FAIL'}")
        for c in r.checks.values():
            mark = "ok  " if c.ok else "FAIL"
            lines.append(f"  {mark} {c.name:<34} {c.passed:>5} passed {c.failed:>4} failed  "
                         f"max residual {c.max_residual:.3e}")
            for f in c.failures:
                lines.append(f"       case {f['case']}: {f['note']} (residual {f['residual']})")
    lines.append("all suites passed" if all(r.ok for r in results) else "some suites failed")
    return "\n".join(lines)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(encode(payload), indent=2))
    else:
        print(text)


def cmd_check(args) -> int:
    report = run_scenario(args.file, seed=args.seed, tol=args.tol, jobs=args.jobs, default_seed=env_seed())
    _emit(args, report.to_dict(), format_report_text(report))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_demo(args) -> int:
    report = run_scenario_doc(DEMO_SCENARIO, tol=args.tol)
    _emit(args, report.to_dict(), format_report_text(report))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_prop(args) -> int:
    seed = env_seed() if args.seed is None else args.seed
    results = run_property_suite(args.suite, args.cases, seed, args.tol if args.tol is not None else DEFAULT_TOL)
    payload = {"suites": [r.to_dict() for r in results], "seed": seed, "ok": all(r.ok for r in results)}
    _emit(args, payload, format_suites_text(results))
    return EXIT_OK if payload["ok"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="override the numerical tolerance")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS,
                        help="report format (default: text)")

    parser = argparse.ArgumentParser(prog="qcm", parents=[common],
                                     description="Classical and quantum conditional measures at finite scale.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="run a scenario file")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=None, help="overrides the scenario seed")
    p.add_argument("--jobs", type=int, default=1, help="worker threads for independent tasks")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("prop", parents=[common], help="run a randomized property suite")
    p.add_argument("suite", help="one of: " + ", ".join([*SUITES, "all"]))
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=int, default=None, help=f"defaults to ${SEED_ENV} or 0")
    p.set_defaults(func=cmd_prop)

    p = sub.add_parser("demo", parents=[common], help="run the built-in worked examples")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.tol = getattr(args, "tol", None)
    args.format = getattr(args, "format", "text")
    if getattr(args, "cases", 1) < 1 or getattr(args, "jobs", 1) < 1:
        print("qcm: --cases and --jobs must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ParseError, UnresolvedReference, UnknownSuite) as exc:
        print(f"qcm: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
