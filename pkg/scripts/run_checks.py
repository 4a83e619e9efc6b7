"""Run every JSON config in a directory through the experiment harness.

    python3 scripts/run_checks.py scripts/configs --workers 2
"""
import argparse
import sys
from pathlib import Path

from rgorder.experiments import load_config, run_experiment


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("configs", type=Path)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    failures = 0
    for path in sorted(args.configs.glob("*.json")):
        cfg = load_config(path)
        res = run_experiment(cfg, workers=args.workers)
        failures += res.hard_failures
        print(f"{path.name}: {len(res.records)} trials -> {res.summary_path}")
        for row in res.summary:
            print(f"  {row['metric']:<40} n={row['count']:<5} mean={row['mean']:.4g} se={row['stderr']:.2g}")
    return 2 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
