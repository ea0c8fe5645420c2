#!/usr/bin/env python3
"""Desk-scale reproduction of the headline numbers (a few minutes).

Runs the oracle verification, the bulk-statistics ensemble at
L in {20, 40, 60, 100}, and the L=100 deletion-threshold scan, writing
everything under out/desk/.  Pass --paper to extend the statistics run
to L = 200 (slower).
"""

import argparse
import sys

from akltsim.cli import main as cli


def run(argv):
    code = cli(argv)
    if code != 0:
        sys.exit(code)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="out/desk")
    ap.add_argument("--seed", type=int, default=20110301)
    ap.add_argument("--paper", action="store_true",
                    help="also sample L=200 for the statistics run")
    args = ap.parse_args()

    sizes = ["20", "40", "60", "100"] + (["200"] if args.paper else [])
    run(["oracle-verify", "--seed", str(args.seed), "--out", args.out])
    run(["sample", "--L", *sizes, "--samples", "500",
         "--seed", str(args.seed), "--out", args.out])
    run(["percolate", "--L", "100", "--samples", "300", "--trials", "8",
         "--seed", str(args.seed), "--out", args.out])
    print("desk-scale artifacts written under", args.out)
