#!/usr/bin/env python3
"""Emit the bound reports (query floors, prediction ceilings, scarce-budget
floor) for the shipped presets as {name}_bounds.json / .csv."""

import argparse
import sys

from bufalu.cli import main

DEFAULT = ["table2-unique", "table2-multiple", "table3-unique", "fig1"]


def run() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("presets", nargs="*", default=DEFAULT)
    ap.add_argument("--out", default="runs")
    args = ap.parse_args()

    for name in args.presets:
        code = main(["bounds", "--preset", name, "--out", args.out])
        if code != 0:
            print(f"{name} failed with exit code {code}", file=sys.stderr)
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run())
