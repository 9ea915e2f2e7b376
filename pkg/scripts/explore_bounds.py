#!/usr/bin/env python3
"""Run every exploration scan on the default grid and print the findings:
the two reference values, sign-change witnesses for both no-ordering
comparisons, the conjecture-scan minimum, and the extremizer table.

Usage:
    python scripts/explore_bounds.py [--out exploration.json]
"""

import argparse
import json
import sys

from opmeans.explore import (
    DEFAULT_EXTREMIZER_SAMPLES,
    GridSpec,
    conjecture_scan,
    no_ordering_scan,
    reference_comparison,
    verify_extremizers,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="exploration.json")
    args = parser.parse_args()

    grid = GridSpec()
    scans = []

    ref = reference_comparison()
    scans.append(ref.to_json_dict())
    print("reference values at (a, b) = (1, 10):")
    for row in ref.rows:
        print(f"  nu={row['nu']:.1f}: computed {row['computed']:+.6f} "
              f"(reference {row['reference']:+.6f}, deviation {row['deviation']:.2e})")

    for kind in ("ratio", "difference"):
        rep = no_ordering_scan(kind, grid)
        scans.append(rep.to_json_dict())
        print(f"\n{rep.name}: {rep.points} points, "
              f"{rep.positives} positive / {rep.negatives} negative")
        for label, wit in (("positive", rep.positive_witness), ("negative", rep.negative_witness)):
            if wit:
                nu = wit.get("nu")
                print(f"  {label} witness: a={wit['a']:.4g} b={wit['b']:.4g} "
                      f"nu={nu:.2f} value={wit['value']:+.6g}")

    rep = conjecture_scan(grid)
    scans.append(rep.to_json_dict())
    print(f"\nconjecture scan: {rep.points} points, min {rep.min_value:.4e} "
          f"at a={rep.min_at['a']:.4g} b={rep.min_at['b']:.4g}, "
          f"{rep.negatives} negatives, {rep.violations} component violations")
    if rep.negative_witness:
        print(f"  NEGATIVE WITNESS (conjecture counterexample): {rep.negative_witness}")

    ext = verify_extremizers(DEFAULT_EXTREMIZER_SAMPLES)
    scans.append(ext.to_json_dict())
    print(f"\nextremizers over b in {DEFAULT_EXTREMIZER_SAMPLES}:")
    print(f"  worst argmax deviation {ext.max_argmax_deviation:.2e}, "
          f"worst max-value relative deviation {ext.max_value_rel_deviation:.2e}")

    with open(args.out, "w", encoding="utf-8") as handle:
        json.dump({"scans": scans}, handle, indent=2)
        handle.write("\n")
    print(f"\nreport written to {args.out}")

    if any(s.get("violations") for s in scans):
        return 1
    if rep.negatives:
        return 10
    return 0


if __name__ == "__main__":
    sys.exit(main())
