#!/usr/bin/env python3
"""Run the two deterministic instances (fig1 preset, one seed) and print
the query/regret comparison plus the cost-aware ranking at c = 0.003."""

import argparse
import csv
import sys
from pathlib import Path

from bufalu.cli import main


def final_row(out: Path, name: str) -> dict:
    # single seed: the last trajectory row per policy is the final state
    finals = {}
    with open(out / f"{name}_trajectory.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            finals[row["policy"]] = row
    return finals


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="runs")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    code = main(["run", "--preset", "fig1", "--out", args.out,
                 "--jobs", str(args.jobs)])
    if code != 0:
        return code

    out = Path(args.out)
    for name, cost in (("fig1-unique", 0.003), ("fig1-multiple", 0.003)):
        finals = final_row(out, name)
        print(f"-- {name} (T = {finals['bufalu']['t']})")
        scored = []
        for policy, row in finals.items():
            regret, queries = float(row["regret"]), int(row["queries"])
            scored.append((regret + cost * queries, policy, regret, queries))
            print(f"  {policy:>7s}  regret {regret:10.2f}  queries {queries:8d}")
        b, c = finals["bufalu"], finals["cbm"]
        qr = int(b["queries"]) / int(c["queries"])
        rr = float(b["regret"]) / float(c["regret"])
        print(f"  bufalu/cbm: queries 1/{1 / qr:.0f}, regret {rr:.2f}x")
        scored.sort()
        ranking = ", ".join(f"{p} {s:.2f}" for s, p, _, _ in scored)
        print(f"  regret + {cost}/query, best first: {ranking}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
