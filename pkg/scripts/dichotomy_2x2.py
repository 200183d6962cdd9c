"""Exhaustive and random 2x2 checks: AB >= BA >= 0 forces AB = BA or a common triangular form."""

import argparse
import time

from poscomm.search import dichotomy_grid, dichotomy_sweep


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--values", type=int, nargs="+", default=[0, 1, -1, 2])
    p.add_argument("--random", type=int, default=100_000, help="accepted random rational pairs")
    p.add_argument("--seed", type=int, required=True)
    args = p.parse_args()

    for label, run in (
        (f"grid over {args.values}", lambda: dichotomy_grid(args.values)),
        (f"random rationals, seed {args.seed}", lambda: dichotomy_sweep(args.seed, args.random)),
    ):
        t = time.perf_counter()
        tally = run()
        print(f"{label}: {tally.pairs} pairs, {tally.accepted} accepted, {tally.commuting} commuting, "
              f"{tally.decomposable} decomposable, {len(tally.violations)} violations "
              f"({time.perf_counter() - t:.1f} s)")
        for v in tally.violations[:5]:
            print("  ", v)


if __name__ == "__main__":
    main()
