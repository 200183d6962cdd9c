"""Run radical-positive campaigns over dims 2-6 and print one summary row per run.

    python3 scripts/run_campaign.py --seed 1 --count 2000 --out runs/
"""

import argparse
import json
import logging
from pathlib import Path

from poscomm.search import SamplerConfig, run_campaign

STRATEGIES = ("rejection-integer", "commuting-perturbation")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1000, help="accepted pairs per (dim, strategy)")
    p.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    p.add_argument("--goals", nargs="+", default=["radical-positive", "extensione", "mccoy"])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, help="directory for JSONL corpora and summary.json")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO)

    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
    rows = []
    print(f"{'dim':>3} {'strategy':<24} {'accepted':>8} {'rate':>8} {'viol':>5} {'secs':>7}")
    for dim in args.dims:
        for k, strategy in enumerate(STRATEGIES):
            cfg = SamplerConfig(dim=dim, strategy=strategy, seed=args.seed * 100 + 10 * dim + k,
                                count=args.count, max_attempts=100_000)
            corpus = args.out / f"dim{dim}-{strategy}.jsonl" if args.out else None
            s = run_campaign(cfg, args.goals, corpus=corpus, workers=args.workers)
            rows.append(s.to_json())
            print(f"{dim:>3} {strategy:<24} {s.accepted:>8} {s.acceptance_rate:>8.4f} "
                  f"{len(s.violations):>5} {s.wall_time:>7.2f}")
    if args.out:
        (args.out / "summary.json").write_text(json.dumps(rows, indent=2) + "\n")
    return 1 if any(r["violations"] for r in rows) else 0


if __name__ == "__main__":
    raise SystemExit(main())
