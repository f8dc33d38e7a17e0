"""Monte Carlo harness for the MSE sweeps, topology studies and station data."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from . import allocation as alloc
from .distsim import (run_bounded_quantized, run_exact, run_unbounded_quantized,
                      run_with_injected_errors)
from .filter_design import FilterSpec, apply_filter_exact, chebyshev_fit
from .graph_core import (Graph, GraphError, build_binomial_degree_graph,
                         build_geometric_graph, eccentricities,
                         geometric_graph_from_coords, laplacians)
from .quantizer import quantize_array

SCHEME_NAMES = ("unbounded", "bounded-uniform", "bounded-optimized")
RANGE_POLICIES = ("stepwise", "l2", "linf")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    n: int = 50
    theta: float = 2.0
    kappa: float = 0.2
    graph: str = "geometric"              # geometric | binomial
    binomial_trials: int = 20
    binomial_p: float = 0.3
    signal: str = "coordinate-quadratic"  # coordinate-quadratic | uniform-random
    noise_sigma: float = 0.1
    filter: dict = field(default_factory=lambda: {"kind": "lowpass_denoise", "tau": 3.0})
    K: int = 9
    budgets: list = field(default_factory=lambda: [2, 3, 4, 6, 8])
    budget_mode: str = "per_message"      # per_message | total | per_node
    schemes: list = field(default_factory=lambda: ["bounded-uniform", "bounded-optimized"])
    trials: int = 200
    seed: int = 0
    range_policy: str = "l2"
    budget_repair: bool = False
    fixed_graph: bool = False

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.n < 2 or self.K < 0:
            raise ConfigError("need n >= 2 and K >= 0")
        if self.graph not in ("geometric", "binomial"):
            raise ConfigError(f"unknown graph family {self.graph!r}")
        if self.signal not in ("coordinate-quadratic", "uniform-random"):
            raise ConfigError(f"unknown signal {self.signal!r}")
        if self.budget_mode not in ("per_message", "total", "per_node"):
            raise ConfigError(f"unknown budget_mode {self.budget_mode!r}")
        if self.range_policy not in RANGE_POLICIES:
            raise ConfigError(f"unknown range_policy {self.range_policy!r}")
        bad = set(self.schemes) - set(SCHEME_NAMES)
        if bad:
            raise ConfigError(f"unknown schemes {sorted(bad)}")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be >= 0")
        if not self.budgets:
            raise ConfigError("at least one budget is required")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        return asdict(self)

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list          # dicts: scheme, budget, bits_per_msg, mse_mean, mse_std, trials
    records: list       # per-trial dicts
    skipped: int = 0
    infeasible: dict = field(default_factory=dict)   # "scheme@budget" -> trial count

    def row(self, scheme: str, budget) -> dict:
        for r in self.rows:
            if r["scheme"] == scheme and r["budget"] == budget:
                return r
        raise KeyError((scheme, budget))

    def to_csv(self) -> str:
        lines = ["scheme,budget,bits_per_msg,mse_mean,mse_std,trials"]
        for r in self.rows:
            lines.append(f"{r['scheme']},{r['budget']!r},{r['bits_per_msg']!r},"
                         f"{r['mse_mean']!r},{r['mse_std']!r},{r['trials']}")
        return "\n".join(lines) + "\n"

    def manifest(self) -> dict:
        return {"config": self.config.to_dict(), "config_hash": self.config.digest(),
                "seed": self.config.seed, "trials": self.config.trials,
                "skipped_trials": self.skipped, "infeasible_trials": self.infeasible}


def make_signal(g: Graph, kind: str, rng: np.random.Generator) -> np.ndarray:
    if kind == "coordinate-quadratic":
        if g.coords is None:
            raise ConfigError("coordinate-quadratic signal needs node coordinates")
        return g.coords[:, 0] ** 2 + g.coords[:, 1] ** 2 - 1.0
    if kind == "uniform-random":
        return rng.uniform(0.0, 1.0, g.n_nodes)
    raise ConfigError(f"unknown signal {kind!r}")


def add_noise(f, sigma: float, seed=None) -> np.ndarray:
    """``f`` plus i.i.d. N(0, sigma^2) noise, reproducible for a given seed."""
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    f = np.asarray(f, dtype=float)
    if sigma == 0:
        return f.copy()
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return f + rng.normal(0.0, sigma, f.shape)


def quantizer_range(f, policy: str, K: int | None = None):
    """Range of the bounded scheme's quantizer.

    ``l2`` uses ``||f||_2``, which bounds every shifted iterate;
    ``stepwise`` uses ``||f||_inf`` at step 0 (the iterate is ``f`` itself) and
    ``||f||_2`` afterwards, returned as a length-K vector;
    ``linf`` uses ``||f||_inf`` everywhere and saturates when an iterate
    overshoots it.
    """
    inf, l2 = float(np.max(np.abs(f))), float(np.linalg.norm(f))
    if policy == "l2":
        return l2
    if policy == "linf":
        return inf
    if policy == "stepwise":
        if K is None:
            raise ValueError("stepwise ranges need K")
        R = np.full(K, l2)
        if K:
            R[0] = inf
        return R
    raise ConfigError(f"unknown range policy {policy!r}")


def budget_total(budget: float, mode: str, degrees: np.ndarray, K: int) -> float:
    """Translate a configured budget into the total ``sum x[n,k] d[n]``."""
    if mode == "per_message":
        return float(budget) * K * float(degrees.sum())
    if mode == "per_node":
        return float(budget) * len(degrees)
    return float(budget)


def sample_graph(cfg: ExperimentConfig, rng: np.random.Generator) -> Graph:
    if cfg.graph == "geometric":
        return build_geometric_graph(cfg.n, cfg.theta, cfg.kappa, rng)
    return build_binomial_degree_graph(cfg.n, cfg.binomial_trials, cfg.binomial_p, rng)


@dataclass
class TrialSetup:
    graph: Graph
    lap: object
    approx: object
    f: np.ndarray
    F: np.ndarray
    R: object   # scalar or per-step vector


def prepare_trial(cfg: ExperimentConfig, rng: np.random.Generator, graph: Graph | None = None,
                  base_signal: np.ndarray | None = None) -> TrialSetup:
    g = sample_graph(cfg, rng) if graph is None else graph
    lap = laplacians(g)
    spec = FilterSpec.from_dict(cfg.filter, lambda_max=lap.lambda_max)
    approx = chebyshev_fit(spec, cfg.K, lap.lambda_max)
    clean = make_signal(g, cfg.signal, rng) if base_signal is None else base_signal
    f = add_noise(clean, cfg.noise_sigma, rng)
    F = alloc.compute_F(alloc.compute_Hk(approx, lap.normalized))
    return TrialSetup(g, lap, approx, f, F, quantizer_range(f, cfg.range_policy, cfg.K))


def plan_for(scheme: str, setup: TrialSetup, B: float, K: int, repair: bool = False):
    d = setup.graph.degrees
    if scheme == "bounded-optimized":
        real = alloc.kkt_allocate(setup.F, d, B, setup.R)
        return alloc.integerize(real, setup.F, repair=repair, R=setup.R)
    return alloc.uniform_allocate(B, d, K)


def _run_trial(cfg: ExperimentConfig, seed_seq: np.random.SeedSequence, graph: Graph | None,
               base_signal=None, trace_sink: dict | None = None):
    rng = np.random.default_rng(seed_seq)
    try:
        setup = prepare_trial(cfg, rng, graph, base_signal)
    except GraphError as exc:
        return {"skipped": str(exc)}
    g, lap, approx, f = setup.graph, setup.lap, setup.approx, setup.f
    ref_unbounded = run_exact(g, approx, f, lap).output
    # the noiseless bounded scheme is the same polynomial; its own reference
    ref_bounded = run_with_injected_errors(g, approx, f, np.zeros((cfg.K, g.n_nodes)),
                                           "bounded", lap).output
    out = []
    for budget in cfg.budgets:
        B = budget_total(budget, cfg.budget_mode, g.degrees, cfg.K)
        for scheme in cfg.schemes:
            try:
                plan = plan_for(scheme, setup, B, cfg.K, cfg.budget_repair)
            except alloc.InfeasibleBudget as exc:
                out.append({"scheme": scheme, "budget": budget, "infeasible": str(exc)})
                continue
            if scheme == "unbounded":
                tr = run_unbounded_quantized(g, approx, f, plan, lap)
                ref = ref_unbounded
            else:
                tr = run_bounded_quantized(g, approx, f, plan, lap, range_=setup.R)
                ref = ref_bounded
            if trace_sink is not None:
                trace_sink[(scheme, budget)] = tr
            err = tr.output - ref
            out.append({
                "scheme": scheme, "budget": budget,
                "mse": float(np.mean(err**2)),
                "sq_error": float(np.sum(err**2)),
                "model_sq_error": alloc.expected_mse(setup.F, plan.bits, setup.R),
                "bits_per_msg": plan.bits_per_message,
                "cost": plan.cost, "B": B,
            })
    return {"results": out}


def _pairwise_sum(values) -> float:
    # fixed binary-tree reduction: order-independent of worker scheduling
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        vals = [vals[i] + vals[i + 1] if i + 1 < len(vals) else vals[i]
                for i in range(0, len(vals), 2)]
    return float(vals[0])


def run_mse_sweep(cfg: ExperimentConfig, threads: int = 1, keep_records: bool = True,
                  graph: Graph | None = None, base_signal=None,
                  trace_sink: dict | None = None) -> ExperimentResult:
    """MSE between quantized and unquantized outputs, per scheme and budget.

    Each trial draws a fresh graph, signal and noise from its own child seed,
    so results do not depend on ``threads``. Passing ``graph`` (and optionally
    ``base_signal``) holds them fixed and only the noise varies. Traces of the
    first trial are stored in ``trace_sink`` when given.
    """
    cfg.validate()
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    if graph is None and cfg.fixed_graph:
        graph = sample_graph(cfg, np.random.default_rng(np.random.SeedSequence([cfg.seed, 1])))

    def job(i):
        return _run_trial(cfg, children[i], graph, base_signal, trace_sink if i == 0 else None)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            trials = list(ex.map(job, range(cfg.trials)))
    else:
        trials = [job(i) for i in range(cfg.trials)]

    records, skipped = [], 0
    for t, res in enumerate(trials):
        if "skipped" in res:
            skipped += 1
            continue
        for r in res["results"]:
            records.append({"trial": t, **r})
    rows, infeasible = [], {}
    for budget in cfg.budgets:
        for scheme in cfg.schemes:
            mine = [r for r in records if r["scheme"] == scheme and r["budget"] == budget]
            recs = [r for r in mine if "mse" in r]
            if len(recs) < len(mine):
                infeasible[f"{scheme}@{budget}"] = len(mine) - len(recs)
            if not recs:
                rows.append({"scheme": scheme, "budget": budget, "bits_per_msg": float("nan"),
                             "mse_mean": float("nan"), "mse_std": float("nan"), "trials": 0})
                continue
            mses = [r["mse"] for r in recs]
            mean = _pairwise_sum(mses) / len(mses)
            var = _pairwise_sum([(m - mean) ** 2 for m in mses]) / len(mses)
            rows.append({
                "scheme": scheme, "budget": budget,
                "bits_per_msg": _pairwise_sum([r["bits_per_msg"] for r in recs]) / len(recs),
                "mse_mean": mean, "mse_std": math.sqrt(var), "trials": len(recs),
                "model_sq_error_mean": _pairwise_sum([r["model_sq_error"] for r in recs]) / len(recs),
                "sq_error_mean": _pairwise_sum([r["sq_error"] for r in recs]) / len(recs),
            })
    return ExperimentResult(cfg, rows, records if keep_records else [], skipped, infeasible)


# ---------------------------------------------------------------- propagation

@dataclass
class PropagationResult:
    kappa: float | None
    node: int
    abs_error: np.ndarray      # |z_K difference| per node
    output_error: np.ndarray   # filtered-output difference per node
    mse: float
    eps: float


def run_error_propagation_study(g: Graph, node: int, approx, f_in, delta_bits: int = 8,
                                range_: float | None = None, kappa: float | None = None,
                                eps: float | None = None) -> PropagationResult:
    """Quantize only ``z_0[node]``; everything else travels exactly (bounded scheme)."""
    lap = laplacians(g)
    K = approx.order
    if eps is None:
        R = float(np.max(np.abs(f_in))) if range_ is None else range_
        eps = float(quantize_array(f_in[node], R, delta_bits) - f_in[node])
    E = np.zeros((K, g.n_nodes))
    E[0, node] = eps
    clean = run_with_injected_errors(g, approx, f_in, np.zeros_like(E), "bounded", lap)
    noisy = run_with_injected_errors(g, approx, f_in, E, "bounded", lap)
    diff = noisy.output - clean.output
    return PropagationResult(kappa, node, np.abs(noisy.z_history[-1] - clean.z_history[-1]),
                             diff, float(np.mean(diff**2)), eps)


def find_propagation_construction(n: int = 50, kappas=(0.18, 0.25, 0.3), theta: float = 2.0,
                                  seed=0, max_tries: int = 10_000):
    """Shared coordinates where one node and a single neighbour are cut off at the
    smallest kappa but join the rest of the network at the larger ones.

    Returns ``(coords, node, seed_used)``. The search is deterministic in ``seed``.
    """
    ss = np.random.SeedSequence(seed)
    for t, child in enumerate(ss.spawn(max_tries)):
        rng = np.random.default_rng(child)
        coords = rng.uniform(0.0, 1.0, (n, 2))
        graphs = [geometric_graph_from_coords(coords, theta, k) for k in kappas]
        g0 = graphs[0]
        if np.any(g0.degrees == 0):
            continue
        if not all(gk.is_connected() for gk in graphs[1:]):
            continue
        for v in range(n):
            nb = g0.neighbors(v)
            if len(nb) != 1 or g0.degrees[nb[0]] != 1:
                continue
            # pair {v, nb} is an isolated component; the rest must be connected
            rest = np.setdiff1d(np.arange(n), [v, nb[0]])
            sub = Graph(g0.weights[np.ix_(rest, rest)])
            if sub.is_connected():
                return coords, v, t
    raise GraphError("no matching construction found")


def appendix_b_study(n: int = 50, K: int = 17, theta: float = 2.0, kappas=(0.18, 0.25, 0.3),
                     delta_bits: int = 8, seed=0, noise_sigma: float = 0.0):
    coords, node, _ = find_propagation_construction(n, kappas, theta, seed)
    f = coords[:, 0] ** 2 + coords[:, 1] ** 2 - 1.0
    f = add_noise(f, noise_sigma, seed)
    R = float(np.max(np.abs(f)))
    eps = float(quantize_array(f[node], R, delta_bits) - f[node])
    results = []
    for kappa in kappas:
        g = geometric_graph_from_coords(coords, theta, kappa)
        lap = laplacians(g)
        approx = chebyshev_fit(FilterSpec.lowpass(), K, lap.lambda_max)
        results.append(run_error_propagation_study(g, node, approx, f, kappa=kappa, eps=eps))
    return results


# ------------------------------------------------------------ topology stats

def allocation_spread(g: Graph, K: int = 9, filter_cfg: dict | None = None) -> dict:
    lap = laplacians(g)
    spec = FilterSpec.from_dict(filter_cfg or {"kind": "lowpass_denoise", "tau": 3.0},
                                lambda_max=lap.lambda_max)
    approx = chebyshev_fit(spec, K, lap.lambda_max)
    F = alloc.compute_F(alloc.compute_Hk(approx, lap.normalized))
    d = g.degrees
    # the spread of x does not depend on B or R: both only shift x uniformly
    plan = alloc.kkt_allocate(F, d, 8.0 * K * d.sum(), 1.0)
    xbar = plan.real_valued.mean(axis=1)
    ecc = eccentricities(g)
    return {"degree_mean": float(d.mean()), "degree_var": float(d.var()),
            "ecc_var": float(ecc.var()), "x_var": float(xbar.var())}


def run_allocation_stats(family: dict, samples: int = 300, seed=0, K: int = 9,
                         max_attempts: int | None = None) -> list[dict]:
    """One row of topology statistics and allocation spread per connected graph.

    ``family`` is ``{"kind": "geometric", "n", "theta", "kappa_range"}`` or
    ``{"kind": "binomial", "n", "mean_range", "var_frac_range"}`` (variance as
    a fraction of the mean, since a binomial's variance is below its mean).
    Disconnected draws are discarded, not repaired.
    """
    if samples < 30:
        raise ValueError("need at least 30 samples")
    rng = np.random.default_rng(seed)
    n = family.get("n", 50)
    max_attempts = max_attempts or 50 * samples
    rows = []
    attempts = 0
    while len(rows) < samples and attempts < max_attempts:
        attempts += 1
        if family["kind"] == "geometric":
            kappa = float(rng.uniform(*family.get("kappa_range", (0.15, 0.4))))
            g = geometric_graph_from_coords(rng.uniform(0, 1, (n, 2)), family.get("theta", 2.0), kappa)
            if not g.is_connected():
                continue
            params = {"kappa": kappa}
        elif family["kind"] == "binomial":
            mean = float(rng.uniform(*family.get("mean_range", (3.0, 10.0))))
            frac = float(rng.uniform(*family.get("var_frac_range", (0.1, 0.9))))
            p = 1.0 - frac
            trials = max(1, int(round(mean / p)))
            try:
                g = build_binomial_degree_graph(n, trials, p, rng, retries=1)
            except GraphError:
                continue
            params = {"trials": trials, "p": p}
        elif family["kind"] == "complete":
            g = Graph(np.ones((n, n)) - np.eye(n))
            params = {}
        else:
            raise ValueError(f"unknown family {family['kind']!r}")
        rows.append({**params, **allocation_spread(g, K, family.get("filter"))})
    if len(rows) < samples:
        raise GraphError(f"only {len(rows)} connected graphs in {attempts} attempts")
    return rows


def correlation_signs(rows: list[dict]) -> dict:
    """Spearman correlations of x-variance with degree mean and eccentricity variance."""
    xv = [r["x_var"] for r in rows]
    out = {}
    for key in ("degree_mean", "degree_var", "ecc_var"):
        res = stats.spearmanr([r[key] for r in rows], xv)
        out[key] = (float(res.statistic), float(res.pvalue))
    return out


# --------------------------------------------------------------- station data

EARTH_RADIUS_KM = 6371.0088
KM_PER_DEGREE = 2 * np.pi * EARTH_RADIUS_KM / 360.0


def haversine_km(lat, lon) -> np.ndarray:
    lat = np.radians(np.asarray(lat, dtype=float))
    lon = np.radians(np.asarray(lon, dtype=float))
    dlat = lat[:, None] - lat[None, :]
    dlon = lon[:, None] - lon[None, :]
    h = np.sin(dlat / 2) ** 2 + np.cos(lat[:, None]) * np.cos(lat[None, :]) * np.sin(dlon / 2) ** 2
    return 2 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))


def ingest_station_csv(path, year: int, theta: float, kappa_km: float,
                       distance_unit_km: float = KM_PER_DEGREE):
    """Station graph and yearly mean signal from a long-format CSV.

    Columns: ``station_id, latitude, longitude, date, value``. Distances are
    great-circle kilometres divided by ``distance_unit_km`` (one degree of arc
    by default) before the kernel ``exp(-l^2 / theta)``; the threshold
    ``kappa_km`` is in kilometres. Returns ``(graph, signal, station_ids)``.
    """
    sums: dict = {}
    counts: dict = {}
    pos: dict = {}
    required = ["station_id", "latitude", "longitude", "date", "value"]
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or any(c not in reader.fieldnames for c in required):
            raise ValueError(f"{path}: header must contain {required}")
        for row in reader:
            line = reader.line_num
            try:
                sid = row["station_id"].strip()
                lat, lon = float(row["latitude"]), float(row["longitude"])
                date = row["date"].strip()
                raw = row["value"].strip()
                yr = int(date[:4])
            except (TypeError, ValueError, AttributeError) as exc:
                raise ValueError(f"{path}:{line}: malformed row ({exc})") from None
            if not sid or not -90 <= lat <= 90 or not -180 <= lon <= 180:
                raise ValueError(f"{path}:{line}: malformed row")
            pos.setdefault(sid, (lat, lon))
            if yr != year or raw == "":
                continue
            try:
                val = float(raw)
            except ValueError:
                raise ValueError(f"{path}:{line}: malformed value {raw!r}") from None
            if not math.isfinite(val):
                continue
            sums[sid] = sums.get(sid, 0.0) + val
            counts[sid] = counts.get(sid, 0) + 1
    ids = sorted(sums)
    if len(ids) < 2:
        raise ValueError(f"fewer than two stations report data in {year}")
    lat = np.array([pos[s][0] for s in ids])
    lon = np.array([pos[s][1] for s in ids])
    dist_km = haversine_km(lat, lon)
    w = np.where(dist_km <= kappa_km, np.exp(-(dist_km / distance_unit_km) ** 2 / theta), 0.0)
    np.fill_diagonal(w, 0.0)
    w = 0.5 * (w + w.T)
    g = Graph(w, np.column_stack([lon, lat]))
    if not g.is_connected():
        raise GraphError("station graph is disconnected; increase kappa_km")
    signal = np.array([sums[s] / counts[s] for s in ids])
    return g, signal, ids


def write_synthetic_stations(path, n_stations: int = 850, year: int = 2010, days: int = 30,
                             seed=0, missing_stations: int = 0) -> None:
    """Synthetic station CSV in the ingest schema (smooth field plus noise)."""
    rng = np.random.default_rng(seed)
    lat = rng.uniform(-15.0, -5.0, n_stations)
    lon = rng.uniform(-60.0, -45.0, n_stations)
    base = 5.0 + 3.0 * np.sin(np.radians(lat) * 20) + 2.0 * np.cos(np.radians(lon) * 15)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["station_id", "latitude", "longitude", "date", "value"])
        for s in range(n_stations):
            yr = year if s >= missing_stations else year - 1
            for day in range(days):
                v = max(0.0, base[s] + rng.normal(0, 2.0))
                w.writerow([f"S{s:04d}", f"{lat[s]:.5f}", f"{lon[s]:.5f}",
                            f"{yr}-01-{day % 28 + 1:02d}", f"{v:.3f}"])


def write_results(result: ExperimentResult, out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "results.csv"
    man_path = out / "manifest.json"
    csv_path.write_text(result.to_csv())
    man_path.write_text(json.dumps(result.manifest(), indent=2, sort_keys=True))
    return csv_path, man_path


def spearman_trend(F: np.ndarray) -> float:
    """Spearman correlation between step index and the node-averaged sensitivity."""
    K = F.shape[0]
    return float(stats.spearmanr(np.arange(K), F.mean(axis=1)).statistic)


__all__ = [
    "ExperimentConfig", "ExperimentResult", "ConfigError", "run_mse_sweep", "add_noise",
    "run_error_propagation_study", "appendix_b_study", "find_propagation_construction",
    "run_allocation_stats", "allocation_spread", "correlation_signs",
    "ingest_station_csv", "write_synthetic_stations", "write_results", "spearman_trend",
    "quantizer_range", "budget_total", "apply_filter_exact",
]
