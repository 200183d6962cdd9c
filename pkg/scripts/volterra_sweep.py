"""Commutator defect and Gelfand decay of the discretized Volterra operator.

Writes a CSV per quantity; plotting is left to whatever reads the CSVs.
"""

import argparse
from pathlib import Path

from poscomm import classical


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-n", type=int, default=512)
    p.add_argument("--gelfand-n", type=int, default=64)
    p.add_argument("--out", type=Path, default=Path("."))
    args = p.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    ns = []
    n = 8
    while n <= args.max_n:
        ns.append(n)
        n *= 2
    defects = classical.defect_sweep(ns)
    with open(args.out / "commutator_defect.csv", "w") as fh:
        classical.write_csv(defects, fh)
    for (n1, d1), (n2, d2) in zip(defects, defects[1:]):
        print(f"n = {n1:>4} -> {n2:>4}: defect {d1:.6f} -> {d2:.6f}, ratio {d2 / d1:.4f}")

    est = classical.gelfand_estimate(classical.volterra_matrix(args.gelfand_n), args.gelfand_n)
    with open(args.out / "gelfand_volterra.csv", "w") as fh:
        classical.write_csv(enumerate(est, 1), fh)
    print(f"||V^k||^(1/k) for n = {args.gelfand_n}: k=1 {est[0]:.4f}, k={len(est) - 1} {est[-2]:.4g}, k={len(est)} {est[-1]}")


if __name__ == "__main__":
    main()
