#!/usr/bin/env python3
"""Dump the closed-form catalog with independent oracle values.

Writes one row per (space, n, t) with the catalog value, the oracle it was
checked against (quadrature of the corresponding length density), and their
absolute difference.
"""
import argparse
import csv
import sys

from magnilab import closed_forms


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-grid", type=float, nargs="+",
                    default=(0.5, 1.0, 2.0, 5.0))
    ap.add_argument("--output", default="catalog.csv")
    args = ap.parse_args()

    rows = closed_forms.catalog_rows(tuple(args.t_grid))
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["space", "n", "t", "closed_form", "oracle", "abs_diff",
                    "citation"])
        for row in rows:
            w.writerow(row)
    worst = max(r[5] for r in rows if r[0] != "line-gauss")
    print(f"{len(rows)} rows -> {args.output}; worst abs_diff "
          f"(excl. flagged line-gauss) = {worst:.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
