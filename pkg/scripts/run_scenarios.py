"""Run every scenario under scenarios/ and print one summary line per file."""

import argparse
from pathlib import Path

from qcm.errors import QcmError
from qcm.scenario import run_scenario

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("directory", nargs="?", default=str(ROOT / "scenarios"))
    args = parser.parse_args()
    for path in sorted(Path(args.directory).glob("*.json")):
        try:
            report = run_scenario(path)
        except QcmError as exc:
            print(f"{path.name:<32} error  {type(exc).__name__}: {exc}")
            continue
        print(f"{path.name:<32} {report.passed}/{len(report.tasks)} passed")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
