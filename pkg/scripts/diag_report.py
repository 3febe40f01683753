#!/usr/bin/env python3
"""Print the diagonal invalidation experiment as a per-machine digest.

Usage: diag_report.py [c] [i_max]
"""

import sys

from paramlat.config import DESK
from paramlat.constructions import diag_invalidation_experiment


def main() -> int:
    c = int(sys.argv[1]) if len(sys.argv) > 1 else 2
    i_max = int(sys.argv[2]) if len(sys.argv) > 2 else 64
    report = diag_invalidation_experiment(c, i_max, DESK)
    print(f"# exponent pressure 2c+2 = {2 * c + 2}, machines 1..{i_max},"
          f" {len(report.scanned_inputs)} inputs scanned")
    print(f"{'idx':>4} {'qual':>5} {'inv':>4} {'rem':>4} {'smaller':>8}  verdict")
    for m in report.machines:
        if m.qualifying_points == 0 and not m.resolved:
            continue
        smaller = len({j for j, _ in m.smaller_events})
        verdict = ("inverted" if m.inversions
                   else "removed" if m.removals
                   else "witnessed-cascade" if smaller
                   else "unresolved")
        print(f"{m.index:>4} {m.qualifying_points:>5} {len(m.inversions):>4}"
              f" {len(m.removals):>4} {smaller:>8}  {verdict}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
