#!/usr/bin/env python3
"""Reproduce the limiting-constant table over a ratio grid.

Desk-scale default runs the coarse grid 0.05:0.05:1 at p_base=1000 in a few
seconds; --full switches to the 0.01:0.01:1 grid.
"""

import argparse
import sys
import time

from specnorm.sinekernel import k_table


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-base", type=int, default=1000)
    ap.add_argument("--step", type=float, default=0.05)
    ap.add_argument("--full", action="store_true", help="use the 0.01 grid step")
    ap.add_argument("--output", default=None)
    args = ap.parse_args()

    step = 0.01 if args.full else args.step
    count = round(1.0 / step)
    ratios = [round((i + 1) * step, 10) for i in range(count)]

    start = time.time()
    rows = k_table(sorted(ratios, reverse=True), p_base=args.p_base)
    elapsed = time.time() - start

    out = open(args.output, "w") if args.output else sys.stdout
    print("ratio,k_value,bracket_lo,bracket_hi,iterations,converged", file=out)
    for est in sorted(rows, key=lambda e: e.ratio):
        print(
            f"{est.ratio:.12g},{est.k_value:.12g},{est.bracket_lo:.12g},"
            f"{est.bracket_hi:.12g},{est.outer_iterations},{str(est.converged).lower()}",
            file=out,
        )
    if args.output:
        out.close()
    print(f"{len(rows)} rows in {elapsed:.1f}s", file=sys.stderr)
    return 0 if all(est.converged for est in rows) else 2


if __name__ == "__main__":
    sys.exit(main())
