#!/usr/bin/env python3
"""Sweep fixed query budgets B = frac * T on the two-arm instance and
print mean final regret per budget fraction (budget-sweep preset,
T = 1000). The curve should dip to an interior minimum near B/T = 0.08."""

import argparse
import csv
import sys
from pathlib import Path

from bufalu.cli import main
from bufalu.cli import load_preset


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, help="override the preset seed count")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="runs")
    args = ap.parse_args()

    argv = ["run", "--preset", "budget-sweep", "--out", args.out,
            "--jobs", str(args.jobs)]
    if args.seeds is not None:
        argv += ["--seeds", str(args.seeds)]
    code = main(argv)
    if code != 0:
        return code

    print(" B/T    mean regret")
    curve = []
    for cfg in load_preset("budget-sweep"):
        frac = float(cfg.name.rsplit("-", 1)[1])
        with open(Path(args.out) / f"{cfg.name}_summary.csv", newline="") as fh:
            row = next(r for r in csv.DictReader(fh)
                       if r["policy"] == "bufalu" and r["metric"] == "regret")
        curve.append((frac, float(row["mean"])))
        print(f"{frac:5.2f}  {curve[-1][1]:12.2f}")
    best = min(curve, key=lambda fr: fr[1])
    print(f"minimum at B/T = {best[0]:g} (regret {best[1]:.2f})")
    return 0


if __name__ == "__main__":
    sys.exit(run())
