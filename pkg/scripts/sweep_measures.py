#!/usr/bin/env python3
"""Emit CSV series of measure values versus network size for graph families.

Plot-data only: each row is (family, n, measure, value), ready for any
plotting tool.  Example:

    python scripts/sweep_measures.py --families cycle path --n-max 40 \
        --measures energy1 convergence_time entropy > sweep.csv
"""

import argparse
import csv
import math
import sys

from systemic import MeasureDescriptor, evaluate, generate

SWEEPABLE = ["energy1", "energy2", "convergence_time", "entropy",
             "local_error", "h2", "hinf"]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--families", nargs="+",
                        default=["complete", "cycle", "path", "star"],
                        choices=["complete", "cycle", "path", "star"])
    parser.add_argument("--measures", nargs="+", default=["energy1"],
                        choices=SWEEPABLE)
    parser.add_argument("--n-min", type=int, default=3)
    parser.add_argument("--n-max", type=int, default=30)
    parser.add_argument("--hp", type=float, default=None,
                        help="also sweep the H_p norm at this exponent")
    args = parser.parse_args()

    descriptors = [(mid, MeasureDescriptor(mid)) for mid in args.measures]
    if args.hp is not None:
        label = "hp_norm(p=inf)" if math.isinf(args.hp) else f"hp_norm(p={args.hp:g})"
        descriptors.append((label, MeasureDescriptor("hp_norm", p=args.hp)))

    writer = csv.writer(sys.stdout)
    writer.writerow(["family", "n", "measure", "value"])
    for family in args.families:
        for n in range(args.n_min, args.n_max + 1):
            graph = generate(family, n)
            for label, descriptor in descriptors:
                writer.writerow([family, n, label,
                                 repr(evaluate(graph, descriptor))])
    return 0


if __name__ == "__main__":
    sys.exit(main())
