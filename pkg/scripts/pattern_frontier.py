#!/usr/bin/env python3
"""Sweep the adequate-pattern search over a small (n, m) grid and print
the frontier: minimal witness length found, or the exhausted bound.

Example:
    python scripts/pattern_frontier.py --n-max 4 --moduli 2,3,4,5 --l-max 9
"""

import argparse
import sys
import time

from pattern_forge.patterns import SearchConfig, search


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=3)
    parser.add_argument("--moduli", default="2,3,5")
    parser.add_argument("--l-max", type=int, default=8)
    parser.add_argument("--node-cap", type=int, default=None)
    args = parser.parse_args()

    moduli = [int(s) for s in args.moduli.split(",")]
    print(f"{'n':>3} {'m':>3} {'result':>12} {'nodes':>10} {'secs':>8}")
    for n in range(1, args.n_max + 1):
        for m in moduli:
            t0 = time.perf_counter()
            out = search(SearchConfig(n=n, m=m, l_max=args.l_max,
                                      node_cap=args.node_cap))
            wall = time.perf_counter() - t0
            if out.status == "found":
                result = f"l={out.pattern.l}"
            elif out.status == "exhausted":
                result = f"none<={args.l_max}"
            else:
                result = "cap hit"
            print(f"{n:>3} {m:>3} {result:>12} {out.nodes:>10} {wall:>8.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
