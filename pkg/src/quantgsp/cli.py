"""Command-line entry point: ``quantgsp <command> [--config PATH|PRESET] [--out DIR] ...``.

Every command writes its artifacts plus a ``manifest.json`` carrying the
resolved config, its hash and the seed. Failures print one JSON object on
stderr and exit with 2 (config), 3 (infeasible budget) or 4 (oracle check).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import allocation as alloc
from . import experiments as ex
from .distsim import (run_bounded_quantized, run_exact, run_unbounded_quantized,
                      run_with_injected_errors)
from .filter_design import FilterSpec, apply_filter_exact, chebyshev_fit
from .graph_core import (Graph, GraphError, build_geometric_graph, eccentricities,
                         laplacians)
from .quantizer import QuantizerConfig, expected_sq_error, quantize_array

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_ORACLE = 0, 2, 3, 4
COMMANDS = ("sweep", "alloc", "fmap", "propagate", "stats", "ingest", "validate")
PRESETS = ("fig1", "fig2", "fig3", "tikhonov", "heat", "rain", "appendixB", "appendixC")


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code, self.kind, self.message = code, kind, message


# ------------------------------------------------------------------ config io

def load_config(ref: str | None) -> dict:
    """Read a JSON config from a path, or a bundled preset by name."""
    if ref is None:
        return {}
    path = Path(ref)
    try:
        if path.exists():
            text = path.read_text()
        elif ref in PRESETS:
            text = resources.files("quantgsp.presets").joinpath(f"{ref}.json").read_text()
        else:
            raise CliError(EXIT_CONFIG, "ConfigError", f"no config file or preset named {ref!r}")
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_CONFIG, "ConfigError", f"{ref}: invalid JSON ({exc})") from None
    if not isinstance(cfg, dict):
        raise CliError(EXIT_CONFIG, "ConfigError", f"{ref}: top level must be an object")
    return cfg


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


def write_manifest(out: Path, command: str, cfg: dict, **extra) -> None:
    man = {"command": command, "config": cfg, "config_hash": config_hash(cfg),
           "seed": cfg.get("seed"), **extra}
    (out / "manifest.json").write_text(json.dumps(man, indent=2, sort_keys=True, default=float))


def _pop(cfg: dict, key, default=None):
    return cfg.pop(key) if key in cfg else default


def _exp_config(d: dict) -> ex.ExperimentConfig:
    return ex.ExperimentConfig.from_dict(d)


def _apply_overrides(cfg: dict, args) -> dict:
    cfg = dict(cfg)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.budget_repair:
        cfg["budget_repair"] = True
    return cfg


# --------------------------------------------------------------------- sweep

def _write_traces(out: Path, sink: dict) -> None:
    tdir = out / "traces"
    tdir.mkdir(exist_ok=True)
    for (scheme, budget), tr in sorted(sink.items(), key=lambda kv: (kv[0][0], str(kv[0][1]))):
        tr.dump(tdir / f"{scheme}_{budget}.json")


def _sweep_one(base: dict, out: Path, args, graph=None, signal=None) -> dict:
    cfg = _exp_config(base)
    sink = {} if args.dump_traces else None
    res = ex.run_mse_sweep(cfg, threads=args.threads, keep_records=False,
                           graph=graph, base_signal=signal, trace_sink=sink)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(res.to_csv())
    write_manifest(out, "sweep", cfg.to_dict(), skipped_trials=res.skipped,
                   infeasible_trials=res.infeasible)
    if sink:
        _write_traces(out, sink)
    dead = [f"{r['scheme']}@{r['budget']}" for r in res.rows if r["trials"] == 0
            and f"{r['scheme']}@{r['budget']}" in res.infeasible]
    if dead:
        raise CliError(EXIT_INFEASIBLE, "InfeasibleBudget",
                       f"no feasible trial for {', '.join(dead)} (results written to {out})")
    return {r_key(r): r["mse_mean"] for r in res.rows}


def r_key(r: dict) -> str:
    return f"{r['scheme']}@{r['budget']}"


def cmd_sweep(cfg: dict, out: Path, args) -> None:
    variants = _pop(cfg, "variants")
    if not variants:
        _sweep_one(cfg, out, args)
        return
    for name, over in variants.items():
        _sweep_one({**cfg, **over}, out / name, args)


# ------------------------------------------------------------- alloc / fmap

def _graph_for(cfg: dict, ecfg: ex.ExperimentConfig) -> Graph:
    gfile = _pop(cfg, "graph_file")
    if gfile is not None:
        return Graph.load(gfile)
    return ex.sample_graph(ecfg, np.random.default_rng(np.random.SeedSequence([ecfg.seed, 1])))


def _allocation_setup(cfg: dict):
    cfg = dict(cfg)
    gfile = cfg.get("graph_file")
    ecfg = _exp_config({k: v for k, v in cfg.items() if k != "graph_file"})
    g = _graph_for(cfg, ecfg)
    rng = np.random.default_rng(np.random.SeedSequence([ecfg.seed, 2]))
    if g.coords is None and ecfg.signal == "coordinate-quadratic":
        ecfg.signal = "uniform-random"
    setup = ex.prepare_trial(ecfg, rng, g)
    return ecfg, setup, gfile


def cmd_alloc(cfg: dict, out: Path, args) -> None:
    ecfg, s, gfile = _allocation_setup(cfg)
    d = s.graph.degrees
    budget = ecfg.budgets[0]
    B = ex.budget_total(budget, ecfg.budget_mode, d, ecfg.K)
    real = alloc.kkt_allocate(s.F, d, B, s.R)
    plan = alloc.integerize(real, s.F, repair=ecfg.budget_repair, R=s.R)
    out.mkdir(parents=True, exist_ok=True)
    (out / "allocation.csv").write_text(plan.to_csv())
    (out / "allocation.json").write_text(json.dumps(plan.to_json()))
    model = alloc.ErrorModel(None, s.F, s.approx.alpha)
    (out / "F.csv").write_text(model.f_csv())
    s.graph.save(out / "graph.json")
    uni = alloc.uniform_allocate(B, d, ecfg.K)
    write_manifest(out, "alloc", {**ecfg.to_dict(), "graph_file": gfile}, B=B, cost=plan.cost,
                   mu=real.mu, log_mu=real.log_mu,
                   expected_mse=alloc.expected_mse(s.F, plan.bits, s.R),
                   expected_mse_uniform=alloc.expected_mse(s.F, uni.bits, s.R))


def cmd_fmap(cfg: dict, out: Path, args) -> None:
    ecfg, s, gfile = _allocation_setup(cfg)
    d = s.graph.degrees
    B = ex.budget_total(ecfg.budgets[0], ecfg.budget_mode, d, ecfg.K)
    real = alloc.kkt_allocate(s.F, d, B, s.R)
    plan = alloc.integerize(real, s.F, repair=ecfg.budget_repair, R=s.R)
    ecc = eccentricities(s.graph)
    coords = s.graph.coords
    out.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node", "step", "F", "x_real", "bits", "degree", "eccentricity", "x", "y"])
    K, N = s.F.shape
    for n in range(N):
        xy = ("", "") if coords is None else (repr(float(coords[n, 0])), repr(float(coords[n, 1])))
        for k in range(K):
            w.writerow([n, k, repr(float(s.F[k, n])), repr(float(real.real_valued[n, k])),
                        int(plan.bits[n, k]), int(d[n]), int(ecc[n]), *xy])
    (out / "fmap.csv").write_text(buf.getvalue())
    write_manifest(out, "fmap", {**ecfg.to_dict(), "graph_file": gfile},
                   spearman_step_vs_F=ex.spearman_trend(s.F), B=B)


# ---------------------------------------------------------------- propagate

PROPAGATE_KEYS = {"n", "K", "theta", "kappas", "delta_bits", "seed", "noise_sigma"}


def cmd_propagate(cfg: dict, out: Path, args) -> None:
    unknown = set(cfg) - PROPAGATE_KEYS
    if unknown:
        raise ex.ConfigError(f"unknown config keys {sorted(unknown)}")
    params = {"n": 50, "K": 17, "theta": 2.0, "kappas": [0.18, 0.25, 0.3],
              "delta_bits": 8, "seed": 0, "noise_sigma": 0.0, **cfg}
    results = ex.appendix_b_study(params["n"], params["K"], params["theta"],
                                  tuple(params["kappas"]), params["delta_bits"],
                                  params["seed"], params["noise_sigma"])
    out.mkdir(parents=True, exist_ok=True)
    with (out / "propagation.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kappa", "node", "abs_error", "output_error"])
        for r in results:
            for n, (a, o) in enumerate(zip(r.abs_error, r.output_error)):
                w.writerow([r.kappa, n, repr(float(a)), repr(float(o))])
    with (out / "summary.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kappa", "node", "eps", "mse"])
        for r in results:
            w.writerow([r.kappa, r.node, repr(r.eps), repr(r.mse)])
    write_manifest(out, "propagate", params, mse=[r.mse for r in results])


# -------------------------------------------------------------------- stats

def cmd_stats(cfg: dict, out: Path, args) -> None:
    unknown = set(cfg) - {"families", "samples", "K", "seed"}
    if unknown:
        raise ex.ConfigError(f"unknown config keys {sorted(unknown)}")
    params = {"families": [{"kind": "geometric", "n": 50, "theta": 2.0,
                            "kappa_range": [0.15, 0.4]}],
              "samples": 300, "K": 9, "seed": 0, **cfg}
    out.mkdir(parents=True, exist_ok=True)
    corr = {}
    for i, fam in enumerate(params["families"]):
        rows = ex.run_allocation_stats(fam, params["samples"],
                                       np.random.SeedSequence([params["seed"], i]), params["K"])
        keys = list(rows[0])
        with (out / f"stats_{fam['kind']}.csv").open("w", newline="") as fh:
            w = csv.DictWriter(fh, keys)
            w.writeheader()
            w.writerows(rows)
        if fam["kind"] != "complete":
            corr[fam["kind"]] = {k: {"rho": v[0], "p": v[1]}
                                 for k, v in ex.correlation_signs(rows).items()}
    write_manifest(out, "stats", params, spearman=corr)


# ------------------------------------------------------------------- ingest

INGEST_KEYS = {"csv", "year", "theta", "kappa_km", "distance_unit_km", "synthetic", "sweep", "seed"}


def cmd_ingest(cfg: dict, out: Path, args) -> None:
    unknown = set(cfg) - INGEST_KEYS
    if unknown:
        raise ex.ConfigError(f"unknown config keys {sorted(unknown)}")
    out.mkdir(parents=True, exist_ok=True)
    year = cfg.get("year", 2010)
    path = cfg.get("csv")
    if path is None:
        syn = dict(cfg.get("synthetic") or {})
        syn.setdefault("year", year)
        syn.setdefault("seed", cfg.get("seed", 0))
        path = out / "stations.csv"
        ex.write_synthetic_stations(path, **syn)
    g, signal, ids = ex.ingest_station_csv(
        path, year, cfg.get("theta", 0.05), cfg.get("kappa_km", 1.8 * ex.KM_PER_DEGREE),
        cfg.get("distance_unit_km", ex.KM_PER_DEGREE))
    g.save(out / "graph.json")
    with (out / "signal.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["node", "station_id", "value"])
        for n, (sid, v) in enumerate(zip(ids, signal)):
            w.writerow([n, sid, repr(float(v))])
    write_manifest(out, "ingest", cfg, stations=len(ids), edges=int(g.degrees.sum() // 2))
    if cfg.get("sweep"):
        sweep = {"n": g.n_nodes, "seed": cfg.get("seed", 0), **cfg["sweep"]}
        if args.budget_repair:
            sweep["budget_repair"] = True
        _sweep_one(sweep, out / "sweep", args, graph=g, signal=signal)


# ----------------------------------------------------------------- validate

def _rel(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def run_oracles(seed: int = 0, fault_injection: bool = False) -> list[dict]:
    """Oracle checks on small fixed instances; returns one row per check."""
    rows = []

    def check(name, value, tol):
        rows.append({"check": name, "value": float(value), "tol": tol, "ok": bool(value <= tol)})

    rng = np.random.default_rng(seed)
    g = build_geometric_graph(20, 2.0, 0.35, np.random.SeedSequence([seed, 7]))
    lap = laplacians(g)
    approx = chebyshev_fit(FilterSpec.lowpass(), 9, lap.lambda_max)
    K, N = approx.order, g.n_nodes
    f = rng.uniform(-1, 1, N)
    sim_alpha = approx.alpha.copy()
    if fault_injection:
        sim_alpha[-1] *= 1.01

    ref = apply_filter_exact(approx, lap.normalized, f)
    zero = np.zeros((K, N))
    check("bounded exactness", np.max(np.abs(
        run_with_injected_errors(g, approx, f, zero, "bounded", lap).output - ref)), 1e-8)
    check("exact scheme vs centralized", np.max(np.abs(run_exact(g, approx, f, lap).output - ref)),
          1e-8)

    H = alloc.compute_Hk(approx, lap.normalized)
    Hu = alloc.unbounded_error_operators(approx, lap.normalized)
    worst_b = worst_u = 0.0
    for _ in range(10):
        eps = rng.normal(0, 1e-3, (K, N))
        base_b = run_with_injected_errors(g, sim_alpha, f, zero, "bounded", lap).output
        sim_b = run_with_injected_errors(g, sim_alpha, f, eps, "bounded", lap).output - base_b
        worst_b = max(worst_b, _rel(sim_b, sum(H[k] @ eps[k] for k in range(K))))
        base_u = run_with_injected_errors(g, sim_alpha, f, zero, "unbounded", lap).output
        sim_u = run_with_injected_errors(g, sim_alpha, f, eps, "unbounded", lap).output - base_u
        worst_u = max(worst_u, _rel(sim_u, sum(Hu[k] @ eps[k] for k in range(K))))
    check("H_k vs bounded simulation", worst_b, 1e-7)
    check("unbounded error operator vs simulation", worst_u, 1e-7)

    F = alloc.compute_F(H)
    d = g.degrees
    B = 6.0 * K * d.sum()
    plan = alloc.kkt_allocate(F, d, B, 1.0)
    num = alloc.kkt_allocate_numeric(F, d, B, 1.0)
    check("KKT vs numeric solver", float(np.max(np.abs(plan.real_valued - num))), 1e-6)
    check("KKT budget equality", abs(plan.real_cost - B) / B, 1e-6)
    stat = (F.T / d[:, None]) * np.exp2(-2.0 * plan.real_valued)
    check("KKT stationarity spread", float(np.ptp(stat) / np.mean(stat)), 1e-8)

    qc = QuantizerConfig(1.0, 8)
    v = rng.uniform(-1, 1, 200_000)
    mse = float(np.mean((quantize_array(v, qc.range, qc.bits) - v) ** 2))
    check("white-noise variance", abs(mse / expected_sq_error(qc) - 1.0), 0.02)

    plan_u = alloc.uniform_allocate(B, d, K)
    tr = run_bounded_quantized(g, approx, f, plan_u, lap, range_=float(np.linalg.norm(f)))
    check("uniform plan cost within budget", max(0.0, plan_u.cost - B) / B, 1e-12)
    run_unbounded_quantized(g, approx, f, plan_u, lap)
    check("quantized output finite", 0.0 if np.all(np.isfinite(tr.output)) else 1.0, 0.0)
    return rows


def cmd_validate(cfg: dict, out: Path | None, args) -> None:
    rows = run_oracles(cfg.get("seed", 0) if args.seed is None else args.seed,
                       args.fault_injection)
    width = max(len(r["check"]) for r in rows)
    for r in rows:
        print(f"{'PASS' if r['ok'] else 'FAIL'}  {r['check']:<{width}}  "
              f"value={r['value']:.3e}  tol={r['tol']:.0e}")
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "validate.json").write_text(json.dumps(rows, indent=2))
        write_manifest(out, "validate", {"seed": args.seed or 0,
                                         "fault_injection": args.fault_injection})
    failed = [r["check"] for r in rows if not r["ok"]]
    if failed:
        raise CliError(EXIT_ORACLE, "OracleFailure", f"failed checks: {', '.join(failed)}")


# --------------------------------------------------------------------- main

HANDLERS = {"sweep": cmd_sweep, "alloc": cmd_alloc, "fmap": cmd_fmap,
            "propagate": cmd_propagate, "stats": cmd_stats, "ingest": cmd_ingest}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quantgsp", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON config path or preset name")
    p.add_argument("--out", default=None, help="output directory (created if absent)")
    p.add_argument("--seed", type=int, default=None, help="seed override (unsigned 64-bit)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--budget-repair", action="store_true",
                   help="greedily trim integerized plans back under the budget")
    p.add_argument("--dump-traces", action="store_true",
                   help="write per-message traces of the first trial")
    p.add_argument("--fault-injection", action="store_true",
                   help="validate only: perturb the simulated filter coefficients")
    return p


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message, "exit_code": code}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise CliError(EXIT_CONFIG, "ConfigError", "seed must be an unsigned 64-bit integer")
        if args.threads < 1:
            raise CliError(EXIT_CONFIG, "ConfigError", "threads must be >= 1")
        cfg = _apply_overrides(load_config(args.config), args)
        if args.command == "validate":
            cmd_validate(cfg, None if args.out is None else Path(args.out), args)
            return EXIT_OK
        if args.command == "propagate" or args.command == "stats":
            cfg.pop("budget_repair", None)
        out = Path(args.out or f"quantgsp-{args.command}")
        out.mkdir(parents=True, exist_ok=True)
        HANDLERS[args.command](cfg, out, args)
    except CliError as exc:
        return _fail(exc.code, exc.kind, exc.message)
    except alloc.InfeasibleBudget as exc:
        return _fail(EXIT_INFEASIBLE, "InfeasibleBudget", str(exc))
    except (ex.ConfigError, GraphError, TypeError, KeyError, ValueError, OSError) as exc:
        return _fail(EXIT_CONFIG, type(exc).__name__, str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
