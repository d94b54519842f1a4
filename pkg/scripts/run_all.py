"""Run every shipped config through the CLI, writing each into its own output folder.

    python scripts/run_all.py [--out results] [--seed 0] [--only roc_density,xi_table]
"""
import argparse
import sys
import time
from pathlib import Path

from rssdetect import cli

ROOT = Path(__file__).resolve().parents[1]
RUNS = [
    ("roc", "roc_density"),
    ("roc", "roc_pathloss"),
    ("roc", "roc_altitude"),
    ("sweep-density", "sweep_density"),
    ("optimize", "optimize"),
    ("validate", "validate"),
    ("xi-table", "xi_table"),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=ROOT / "results")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--only", default="")
    args = ap.parse_args()
    only = set(filter(None, args.only.split(",")))
    status = 0
    for verb, name in RUNS:
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        code = cli.main([verb, "--config", str(ROOT / "configs" / f"{name}.yaml"),
                         "--out", str(args.out / name), "--seed", str(args.seed)])
        print(f"{name:15s} {verb:14s} exit {code}  {time.perf_counter() - t0:6.1f} s")
        status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(main())
