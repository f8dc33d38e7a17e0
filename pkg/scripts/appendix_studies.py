"""Sensitivity map, single-error propagation and topology statistics.

    python3 scripts/appendix_studies.py --out results/ [--samples 300]
"""
import argparse
import json
from pathlib import Path

from quantgsp.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--samples", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    seed = ["--seed", str(args.seed)]

    main(["fmap", "--out", str(out / "fmap"), *seed])
    man = json.loads((out / "fmap" / "manifest.json").read_text())
    print(f"fmap: Spearman(step, mean F) = {man['spearman_step_vs_F']:.3f}")

    main(["propagate", "--config", "appendixB", "--out", str(out / "appendixB"), *seed])
    man = json.loads((out / "appendixB" / "manifest.json").read_text())
    print("single-error MSE across kappa:", ", ".join(f"{m:.3e}" for m in man["mse"]))

    geo = out / "stats_geometric.json"
    geo.parent.mkdir(parents=True, exist_ok=True)
    geo.write_text(json.dumps({"samples": args.samples}))
    main(["stats", "--config", str(geo), "--out", str(out / "stats"), *seed])
    main(["stats", "--config", "appendixC", "--out", str(out / "appendixC"), *seed])
    for d in ("stats", "appendixC"):
        man = json.loads((out / d / "manifest.json").read_text())
        for fam, corr in man["spearman"].items():
            print(f"{fam}: " + ", ".join(f"{k} rho={v['rho']:+.3f} (p={v['p']:.1e})"
                                         for k, v in corr.items()))
