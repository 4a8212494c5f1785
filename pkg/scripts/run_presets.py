#!/usr/bin/env python3
"""Run every optimizer preset of one code family and tabulate the results.

    python scripts/run_presets.py 625 --out runs/625 --seeds 0 1 2
    python scripts/run_presets.py 625 --trials 1000 --strategies plain sa

Each run lands in ``<out>/<preset>/seed-<s>/`` with the usual optimize
outputs; a ``results.csv`` with initial and best rates is written to ``<out>``.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

from hgpopt.cli import main as cli_main
from hgpopt.presets import STRATEGIES


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("family", choices=sorted(STRATEGIES))
    ap.add_argument("--out", type=Path, default=Path("runs"))
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--strategies", nargs="+", default=None, help="subset of plain, sa, ps-hard, ps-easy")
    ap.add_argument("--trials", type=int, help="override trials per cost evaluation")
    ap.add_argument("--alist", help="initial code instead of the family's random draw")
    ap.add_argument("--threads", type=int)
    return ap.parse_args()


def main():
    args = parse_args()
    names = args.strategies or list(STRATEGIES[args.family])
    rows = []
    for name in names:
        preset = f"{args.family}-{name}"
        for seed in args.seeds:
            run_dir = args.out / preset / f"seed-{seed}"
            argv = ["optimize", "--preset", preset, "--seed", str(seed), "--out", str(run_dir)]
            if args.trials:
                argv += ["--trials", str(args.trials)]
            if args.alist:
                argv += ["--alist", args.alist]
            if args.threads:
                argv += ["--threads", str(args.threads)]
            print(f"== {preset} seed {seed}", file=sys.stderr)
            if cli_main(argv) != 0:
                return 1
            summary = json.loads((run_dir / "summary.json").read_text())
            rows.append({"preset": preset, "seed": seed} | summary)

    args.out.mkdir(parents=True, exist_ok=True)
    with (args.out / "results.csv").open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    for r in rows:
        print(f"{r['preset']:>16} seed {r['seed']:>3}  initial {r['initial_rate']:.4g}  best {r['best_rate']:.4g}"
              f"  (eval {r['best_eval']} of {r['evaluations']})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
