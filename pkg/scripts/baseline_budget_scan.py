"""Unbounded baseline MSE against the per-node bit budget.

    python3 scripts/baseline_budget_scan.py [--trials 100]
"""
import argparse

from quantgsp.experiments import ExperimentConfig, run_mse_sweep

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    budgets = [150, 200, 250, 300, 350, 400, 500, 600, 800]
    cfg = ExperimentConfig(budgets=budgets, budget_mode="per_node",
                           schemes=["unbounded", "bounded-uniform", "bounded-optimized"],
                           trials=args.trials, seed=args.seed, budget_repair=True)
    res = run_mse_sweep(cfg, keep_records=False)
    print("bits_per_node,bits_per_msg,unbounded,bounded_uniform,bounded_optimized")
    for b in budgets:
        u = res.row("unbounded", b)
        print(f"{b},{u['bits_per_msg']:.3f},{u['mse_mean']:.4e},"
              f"{res.row('bounded-uniform', b)['mse_mean']:.4e},"
              f"{res.row('bounded-optimized', b)['mse_mean']:.4e}")
