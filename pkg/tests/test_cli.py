import csv
import json

import numpy as np
import pytest

from quantgsp.cli import PRESETS, load_config, main
from quantgsp.graph_core import Graph


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def error_json(capsys):
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


MIN = {"n": 10, "K": 3, "kappa": 0.5, "trials": 5, "budgets": [2, 4],
       "schemes": ["unbounded", "bounded-uniform", "bounded-optimized"]}


def test_presets_load():
    for name in PRESETS:
        assert isinstance(load_config(name), dict)


def test_sweep_minimal(tmp_path):
    cfg = write(tmp_path, "c.json", MIN)
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "a")]) == 0
    rows = list(csv.DictReader(open(tmp_path / "a" / "results.csv")))
    assert len(rows) == 6 and all(r["trials"] == "5" for r in rows)
    man = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert man["seed"] == 0 and len(man["config_hash"]) == 16


def test_sweep_byte_identical_and_seed_override(tmp_path):
    cfg = write(tmp_path, "c.json", MIN)
    for d in ("a", "b"):
        main(["sweep", "--config", cfg, "--out", str(tmp_path / d), "--seed", "42"])
    a = (tmp_path / "a" / "results.csv").read_bytes()
    assert a == (tmp_path / "b" / "results.csv").read_bytes()
    assert json.loads((tmp_path / "a" / "manifest.json").read_text())["seed"] == 42
    main(["sweep", "--config", cfg, "--out", str(tmp_path / "c")])
    assert a != (tmp_path / "c" / "results.csv").read_bytes()


def test_sweep_threads_and_traces(tmp_path):
    cfg = write(tmp_path, "c.json", MIN)
    main(["sweep", "--config", cfg, "--out", str(tmp_path / "a")])
    main(["sweep", "--config", cfg, "--out", str(tmp_path / "b"), "--threads", "3",
          "--dump-traces"])
    assert (tmp_path / "a" / "results.csv").read_bytes() == \
        (tmp_path / "b" / "results.csv").read_bytes()
    assert len(list((tmp_path / "b" / "traces").glob("*.json"))) == 6


def test_sweep_variants(tmp_path):
    cfg = write(tmp_path, "c.json", {**MIN, "variants": {
        "r1": {"filter": {"kind": "tikhonov", "tau": 10.0, "r": 1}},
        "heat": {"filter": {"kind": "heat", "tau": 1.0}}}})
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert (tmp_path / "r1" / "results.csv").exists()
    assert (tmp_path / "heat" / "results.csv").exists()


def test_config_errors(tmp_path, capsys):
    assert main(["sweep", "--config", write(tmp_path, "x.json", {"nn": 1})]) == 2
    assert error_json(capsys)["exit_code"] == 2
    bad = tmp_path / "broken.json"
    bad.write_text("{not json")
    assert main(["sweep", "--config", str(bad)]) == 2
    assert main(["sweep", "--config", "no-such-preset"]) == 2
    assert main(["sweep", "--config", write(tmp_path, "y.json", MIN), "--threads", "0"]) == 2


def test_infeasible_exit(tmp_path, capsys):
    cfg = write(tmp_path, "c.json", {"n": 10, "K": 3, "kappa": 0.5, "budgets": [5],
                                     "budget_mode": "total"})
    assert main(["alloc", "--config", cfg, "--out", str(tmp_path / "o")]) == 3
    err = error_json(capsys)
    assert err["error"] == "InfeasibleBudget" and err["exit_code"] == 3
    assert main(["sweep", "--config", cfg, "--out", str(tmp_path / "s")]) == 3


def test_alloc_symmetric_two_node(tmp_path):
    g = Graph(np.array([[0.0, 0.8], [0.8, 0.0]]))
    g.save(tmp_path / "g.json")
    cfg = write(tmp_path, "c.json", {"graph_file": str(tmp_path / "g.json"), "K": 2,
                                     "budgets": [6], "signal": "uniform-random"})
    assert main(["alloc", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    rows = list(csv.DictReader(open(tmp_path / "o" / "allocation.csv")))
    bits = {(r["node"], r["step"]): int(r["bits"]) for r in rows}
    assert bits[("0", "0")] == bits[("1", "0")] and bits[("0", "1")] == bits[("1", "1")]
    f_rows = (tmp_path / "o" / "F.csv").read_text().splitlines()
    assert f_rows[0] == "node,step,F" and len(f_rows) == 5


def test_alloc_n50_trends(tmp_path):
    cfg = write(tmp_path, "c.json", {"n": 50, "K": 9, "budgets": [4], "seed": 3})
    assert main(["alloc", "--config", cfg, "--out", str(tmp_path / "o"),
                 "--budget-repair"]) == 0
    plan = json.loads((tmp_path / "o" / "allocation.json").read_text())
    bits = np.array(plan["bits"], dtype=float)
    deg = np.array(plan["degrees"])
    # early steps get more bits
    step_mean = bits.mean(axis=0)
    assert step_mean[0] > step_mean[-1]
    # low-degree nodes get more bits than high-degree nodes
    node_mean = bits.mean(axis=1)
    lo, hi = deg <= np.percentile(deg, 25), deg >= np.percentile(deg, 75)
    assert node_mean[lo].mean() > node_mean[hi].mean()
    assert plan["cost"] <= plan["budget"]


def test_fmap(tmp_path):
    cfg = write(tmp_path, "c.json", {"n": 30, "kappa": 0.3, "K": 9, "budgets": [4]})
    assert main(["fmap", "--config", cfg, "--out", str(tmp_path)]) == 0
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["spearman_step_vs_F"] < 0
    header = (tmp_path / "fmap.csv").read_text().splitlines()[0]
    assert header == "node,step,F,x_real,bits,degree,eccentricity,x,y"


def test_propagate_preset(tmp_path):
    assert main(["propagate", "--config", "appendixB", "--out", str(tmp_path)]) == 0
    mse = json.loads((tmp_path / "manifest.json").read_text())["mse"]
    assert mse[0] > mse[1] > mse[2]


def test_stats(tmp_path):
    cfg = write(tmp_path, "c.json", {"families": [{"kind": "complete", "n": 8}], "samples": 30})
    assert main(["stats", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert len((tmp_path / "stats_complete.csv").read_text().splitlines()) == 31


def test_ingest_with_sweep(tmp_path):
    cfg = write(tmp_path, "c.json", {
        "synthetic": {"n_stations": 80, "days": 4}, "kappa_km": 400.0, "theta": 0.5,
        "sweep": {"K": 3, "trials": 2, "budgets": [3],
                  "schemes": ["unbounded", "bounded-uniform"]}})
    assert main(["ingest", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert Graph.load(tmp_path / "graph.json").n_nodes == 80
    rows = list(csv.DictReader(open(tmp_path / "sweep" / "results.csv")))
    assert len(rows) == 2


def test_validate(capsys):
    assert main(["validate"]) == 0
    first = capsys.readouterr().out
    assert "FAIL" not in first
    main(["validate"])
    assert capsys.readouterr().out == first
    assert main(["validate", "--fault-injection"]) == 4
    captured = capsys.readouterr()
    assert "FAIL  H_k vs bounded simulation" in captured.out
    assert json.loads(captured.err)["error"] == "OracleFailure"
