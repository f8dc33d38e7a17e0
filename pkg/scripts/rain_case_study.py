"""Station-network case study.

Without ``--csv`` a synthetic 850-station fixture is generated. A real file
must have columns station_id, latitude, longitude, date, value.

    python3 scripts/rain_case_study.py --out results/rain [--csv stations.csv --year 2010]
"""
import argparse
import json
import sys
import tempfile
from pathlib import Path

from quantgsp.cli import load_config, main

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/rain")
    ap.add_argument("--csv", default=None)
    ap.add_argument("--year", type=int, default=None)
    ap.add_argument("--kappa-km", type=float, default=None)
    ap.add_argument("--trials", type=int, default=None)
    args = ap.parse_args()
    cfg = load_config("rain")
    if args.csv:
        cfg["csv"] = args.csv
    if args.year:
        cfg["year"] = args.year
    if args.kappa_km:
        cfg["kappa_km"] = args.kappa_km
    if args.trials:
        cfg["sweep"]["trials"] = args.trials
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(cfg, fh)
    code = main(["ingest", "--config", fh.name, "--out", args.out])
    Path(fh.name).unlink()
    if code:
        sys.exit(code)
    print((Path(args.out) / "sweep" / "results.csv").read_text())
