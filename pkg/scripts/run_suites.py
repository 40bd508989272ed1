"""Run every verification suite and write one JSON and one CSV file per suite."""

import argparse
import csv
import json
from pathlib import Path

from cfiforge.suites import SUITES, Caps, run_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("results/suites"))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--only", nargs="*", choices=SUITES, default=list(SUITES))
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    caps = Caps.from_env()
    failing = 0
    for name in args.only:
        rep = run_suite(name, args.seed, caps)
        (args.out / f"{name}.json").write_text(json.dumps(rep.to_json(), indent=2) + "\n")
        with open(args.out / f"{name}.csv", "w", newline="") as fh:
            csv.writer(fh).writerows(rep.csv_rows())
        passed = sum(c.passed for c in rep.checks)
        print(f"{name:16s} {passed:4d}/{len(rep.checks):<4d} {'ok' if rep.passed else 'FAIL'}")
        for c in rep.failures():
            print(f"    FAIL [{c.tag}] {c.instance}: {c.detail}")
        failing += not rep.passed
    return 1 if failing else 0


if __name__ == "__main__":
    raise SystemExit(main())
