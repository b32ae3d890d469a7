#!/usr/bin/env python3
"""Regenerate every tabular artifact into results/ with the default setup.

Runs the three commands end to end:
    results/nash/     gains, value matrices, diagnostics, nominal trajectory
    results/moments/  covariance series, bound certificate, scaling table
    results/sweep/    paired Monte Carlo sweep, trace overlay data, samples

Pass --fast to shrink the Monte Carlo budgets for a quick smoke run.
"""

from __future__ import annotations

import argparse
import sys

from lqgames.cli import main as lqgame
from lqgames.config import default_config, dump_config


def run(argv: list[str]) -> None:
    code = lqgame(argv)
    if code != 0:
        sys.exit(code)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--fast", action="store_true")
    args = ap.parse_args()

    extra: list[str] = []
    if args.seed is not None:
        extra += ["--seed", str(args.seed)]

    run(["nash", "--out", f"{args.out}/nash"] + extra)
    run(["moments", "--out", f"{args.out}/moments"] + extra)

    if args.fast:
        cfg = default_config()
        cfg.trials = 50
        cfg.trace.trials = 500
        path = f"{args.out}/sweep_config.json"
        dump_config(cfg, path)
        run(["sweep", "--config", path, "--out", f"{args.out}/sweep"] + extra)
    else:
        run(["sweep", "--out", f"{args.out}/sweep"] + extra)
    print(f"artifacts written under {args.out}/")


if __name__ == "__main__":
    main()
