"""Rebuild the five appendix data sets and the threshold report.

    python3 scripts/reproduce_appendices.py --trials 100 --outdir results/appendices
"""

import argparse
import time
from pathlib import Path

from puzzle_cipher import analysis


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--block-size", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", type=Path, default=Path("results/appendices"))
    args = ap.parse_args()

    start = time.perf_counter()
    data = analysis.run_trials(args.trials, args.block_size, args.seed)
    paths = analysis.write_csvs(data, args.outdir)
    checks = analysis.summarize(data)
    analysis.write_report(checks, args.outdir / "summary.jsonl")
    print(f"{args.trials} trials at n={args.block_size} in {time.perf_counter() - start:.1f} s")
    for p in paths:
        print(f"  wrote {p}")
    for c in checks:
        verdict = {True: "PASS", False: "FAIL", None: "skip"}[c.passed]
        print(f"{verdict} {c.name}: {c.value}")
    return 1 if any(c.passed is False for c in checks) else 0


if __name__ == "__main__":
    raise SystemExit(main())
