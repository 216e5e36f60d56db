#!/usr/bin/env python3
"""Reproduce the benchmark tables from the shipped presets.

Each table preset runs four policies on a 5-arm Bernoulli instance at
T = 1e5. Full scale is 1000 seeds per policy (minutes per table on one
core); pass --seeds for a quick cut. Outputs land in --out (default
"runs") as {name}_trajectory.csv / {name}_summary.csv.
"""

import argparse
import csv
import sys
from pathlib import Path

from bufalu.cli import main

TABLES = ["table2-unique", "table2-multiple", "table3-unique",
          "table3-multiple", "table4-unique", "table4-multiple"]


def print_summary(path: Path) -> None:
    with open(path, newline="") as fh:
        rows = [r for r in csv.DictReader(fh) if r["metric"] in ("regret", "queries")]
    print(f"-- {path}")
    for row in rows:
        print(f"  {row['policy']:>7s} {row['metric']:>7s} "
              f"mean {float(row['mean']):12.2f}  std {float(row['std']):10.2f}")


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("tables", nargs="*", default=TABLES,
                    help=f"presets to run (default: all of {' '.join(TABLES)})")
    ap.add_argument("--seeds", type=int, help="override the preset seed count")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="runs")
    args = ap.parse_args()

    for name in args.tables:
        argv = ["run", "--preset", name, "--out", args.out, "--jobs", str(args.jobs)]
        if args.seeds is not None:
            argv += ["--seeds", str(args.seeds)]
        code = main(argv)
        if code != 0:
            print(f"{name} failed with exit code {code}", file=sys.stderr)
            return code
        print_summary(Path(args.out) / f"{name}_summary.csv")
    return 0


if __name__ == "__main__":
    sys.exit(run())
