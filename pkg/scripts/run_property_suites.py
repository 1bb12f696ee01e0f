"""Run every property suite over several seeds and tabulate the worst residual per check."""

import argparse
import time

from qcm.properties import run_property_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--suite", default="all")
    parser.add_argument("--cases", type=int, default=200)
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    args = parser.parse_args()

    worst: dict[tuple[str, str], float] = {}
    failures = 0
    for seed in args.seeds:
        start = time.perf_counter()
        results = run_property_suite(args.suite, args.cases, seed)
        elapsed = time.perf_counter() - start
        print(f"seed {seed}: {sum(r.ok for r in results)}/{len(results)} suites ok in {elapsed:.1f}s")
        for r in results:
            for c in r.checks.values():
                key = (r.suite, c.name)
                worst[key] = max(worst.get(key, 0.0), c.max_residual)
                failures += c.failed
    print(f"\n{'suite':<16} {'check':<34} max residual")
    for (suite, name), res in sorted(worst.items()):
        print(f"{suite:<16} {name:<34} {res:.3e}")
    print(f"\nfailed cases: {failures}")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
