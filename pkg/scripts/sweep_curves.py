#!/usr/bin/env python3
"""Failure-rate curves for an initial code and any number of optimized ones.

    python scripts/sweep_curves.py 625 runs/625/625-sa/seed-0/best.alist --out curves/625

The first curve is always the family's initial code.  Every extra alist
(typically a ``best.alist`` from an optimize run) gets its own CSV, named
after its parent directories, with columns ``p,rate,std_error,trials,seed``.
Plotting is left to whatever tool reads CSV.
"""

import argparse
import sys
from pathlib import Path

from hgpopt.cli import main as cli_main
from hgpopt.presets import FAMILIES


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("family", choices=sorted(FAMILIES))
    ap.add_argument("alists", nargs="*", type=Path)
    ap.add_argument("--out", type=Path, default=Path("curves"))
    ap.add_argument("--trials", type=int, help="override the family's sweep sample count")
    ap.add_argument("--grid", help="comma-separated p values (default: the family's grid)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    jobs = [("initial", None)] + [("-".join(a.parts[-3:-1]) or a.stem, a) for a in args.alists]
    for label, alist in jobs:
        argv = ["sweep", "--preset", args.family, "--seed", str(args.seed), "--out", str(args.out / label)]
        if alist is not None:
            argv += ["--alist", str(alist)]
        if args.trials:
            argv += ["--trials", str(args.trials)]
        if args.grid:
            argv += ["--grid", args.grid]
        print(f"== {label}", file=sys.stderr)
        if cli_main(argv) != 0:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
