"""Simulated vs modelled output error of the bounded scheme under uniform bits.

Prints the ratio of the mean simulated squared output error to the
white-noise prediction for several bit depths, noise levels and signals.

    python3 scripts/white_noise_check.py [--trials 500]
"""
import argparse

from quantgsp.experiments import ExperimentConfig, run_mse_sweep

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=4)
    args = ap.parse_args()
    print("signal,sigma,range_policy,bits,sim_over_model")
    for signal in ("coordinate-quadratic", "uniform-random"):
        for sigma in (0.1, 0.5):
            for policy in ("l2", "linf"):
                cfg = ExperimentConfig(signal=signal, noise_sigma=sigma, range_policy=policy,
                                       schemes=["bounded-uniform"], budgets=[4, 6, 8, 10],
                                       trials=args.trials, seed=args.seed)
                res = run_mse_sweep(cfg, keep_records=False)
                for r in res.rows:
                    print(f"{signal},{sigma},{policy},{r['budget']},"
                          f"{r['sq_error_mean'] / r['model_sq_error_mean']:.4f}")
