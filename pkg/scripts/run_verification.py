#!/usr/bin/env python3
"""Run the full default verification suite and print a per-check summary.

Usage:
    python scripts/run_verification.py [--seed 0] [--trials 1000] [--out report.json]
"""

import argparse
import json
import sys

from opmeans.verify import SuiteConfig, run_suite


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--out", default="report.json")
    args = parser.parse_args()

    cfg = SuiteConfig(seed=args.seed, trials=args.trials)
    report = run_suite(cfg)

    print(f"suite: seed={cfg.seed} trials={cfg.trials} dims={cfg.dims} "
          f"spectrum=[{cfg.m}, {cfg.big_m}] rel_tol={cfg.rel_tol}")
    print(f"runtime: {report.runtime_seconds:.1f}s\n")
    print(f"{'check':24s} {'results':>8s} {'violations':>10s} {'worst margin':>14s}  worst at")
    for agg in report.checks:
        inst = agg.worst_instance
        print(
            f"{agg.name:24s} {agg.results:8d} {agg.violations:10d} "
            f"{agg.worst_margin:+14.3e}  index={inst['index']} dim={inst['dim']} nu={inst['nu']:.4f}"
        )
    if report.errors:
        print("\nnumerical errors:")
        for err in report.errors:
            print(f"  {err}")

    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump(report.to_json_dict(), handle, indent=2)
        handle.write("\n")
    print(f"\nreport written to {args.out}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
