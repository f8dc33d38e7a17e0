"""Run the MSE-vs-budget sweeps for every bundled preset and print the tables.

    python3 scripts/reproduce_figures.py --out results/ [--trials 50] [--threads 2]
"""
import argparse
import json
import sys
import tempfile
from pathlib import Path

from quantgsp.cli import load_config, main

SWEEPS = ("fig1", "fig2", "fig3", "tikhonov", "heat")


def run(preset, out, trials, threads):
    cfg = load_config(preset)
    if trials:
        cfg["trials"] = trials
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(cfg, fh)
    code = main(["sweep", "--config", fh.name, "--out", str(out / preset),
                 "--threads", str(threads)])
    Path(fh.name).unlink()
    return code


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--trials", type=int, default=None, help="override the preset trial count")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--only", nargs="*", default=SWEEPS)
    args = ap.parse_args()
    out = Path(args.out)
    for preset in args.only:
        if run(preset, out, args.trials, args.threads):
            sys.exit(1)
        for csv_path in sorted((out / preset).rglob("results.csv")):
            print(f"== {csv_path}")
            print(csv_path.read_text())
