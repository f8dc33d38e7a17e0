import csv

import numpy as np
import pytest

from quantgsp import experiments as ex
from quantgsp.filter_design import FilterSpec, chebyshev_fit
from quantgsp.graph_core import GraphError, build_geometric_graph, laplacians


def small_cfg(**kw):
    base = dict(n=12, kappa=0.5, K=3, trials=4, budgets=[3, 6],
                schemes=["unbounded", "bounded-uniform", "bounded-optimized"])
    base.update(kw)
    return ex.ExperimentConfig(**base)


def test_config_validation():
    with pytest.raises(ex.ConfigError):
        ex.ExperimentConfig.from_dict({"trials": 0})
    with pytest.raises(ex.ConfigError):
        ex.ExperimentConfig.from_dict({"schemes": ["magic"]})
    with pytest.raises(ex.ConfigError):
        ex.ExperimentConfig.from_dict({"bogus": 1})
    cfg = ex.ExperimentConfig.from_dict({"n": 20})
    assert cfg.digest() == ex.ExperimentConfig(n=20).digest()
    assert cfg.digest() != ex.ExperimentConfig(n=21).digest()


def test_noise():
    f = np.zeros(100_000)
    np.testing.assert_array_equal(ex.add_noise(f, 0.0, 1), f)
    y = ex.add_noise(f, 0.1, 7)
    assert abs(y.var() / 0.01 - 1) <= 0.03
    np.testing.assert_array_equal(y, ex.add_noise(f, 0.1, 7))
    with pytest.raises(ValueError):
        ex.add_noise(f, -1.0)


def test_budget_modes():
    d = np.array([2, 3])
    assert ex.budget_total(4, "per_message", d, 3) == 60
    assert ex.budget_total(300, "per_node", d, 3) == 600
    assert ex.budget_total(77, "total", d, 3) == 77


def test_quantizer_range_policies():
    f = np.array([3.0, -4.0])
    assert ex.quantizer_range(f, "l2") == 5.0
    assert ex.quantizer_range(f, "linf") == 4.0
    np.testing.assert_array_equal(ex.quantizer_range(f, "stepwise", 3), [4.0, 5.0, 5.0])


def test_sweep_shape_and_records():
    res = ex.run_mse_sweep(small_cfg())
    assert len(res.rows) == 6
    assert all(r["trials"] == 4 for r in res.rows)
    assert len(res.records) == 4 * 2 * 3
    assert all(r["mse"] >= 0 for r in res.records)
    lines = res.to_csv().splitlines()
    assert lines[0] == "scheme,budget,bits_per_msg,mse_mean,mse_std,trials"
    assert len(lines) == 7


def test_sweep_high_rate_vanishes():
    res = ex.run_mse_sweep(small_cfg(trials=1, budgets=[16], n=50, kappa=0.2, K=9,
                                     schemes=["bounded-uniform", "bounded-optimized"]))
    assert all(r["mse_mean"] < 1e-6 for r in res.rows)


def test_sweep_deterministic_across_threads():
    a = ex.run_mse_sweep(small_cfg(trials=6), threads=1)
    b = ex.run_mse_sweep(small_cfg(trials=6), threads=3)
    assert a.to_csv() == b.to_csv()


def test_sweep_infeasible_accounting():
    res = ex.run_mse_sweep(small_cfg(budgets=[1.0], budget_mode="total"))
    assert all(r["trials"] == 0 for r in res.rows)
    assert sum(res.infeasible.values()) == 4 * 3


def test_model_dominance_per_trial():
    # optimized real-valued plan never loses to uniform on the model objective
    cfg = small_cfg(n=30, kappa=0.35, K=9)
    rng = np.random.default_rng(0)
    for _ in range(5):
        s = ex.prepare_trial(cfg, rng)
        d = s.graph.degrees
        for b in (2, 4, 6):
            B = b * 9 * d.sum()
            from quantgsp import allocation as alloc
            opt = alloc.kkt_allocate(s.F, d, B, s.R)
            uni = alloc.uniform_allocate(B, d, 9)
            assert alloc.expected_mse(s.F, opt.real_valued, s.R) <= \
                alloc.expected_mse(s.F, uni.real_valued, s.R) * (1 + 1e-12)


def test_propagation_zero_eps():
    g = build_geometric_graph(20, 2.0, 0.4, seed=0)
    lap = laplacians(g)
    approx = chebyshev_fit(FilterSpec.lowpass(), 17, lap.lambda_max)
    r = ex.run_error_propagation_study(g, 3, approx, np.ones(20), eps=0.0)
    assert np.all(r.abs_error == 0) and r.mse == 0


def test_propagation_stays_in_component():
    coords, node, _ = ex.find_propagation_construction(seed=0)
    from quantgsp.graph_core import geometric_graph_from_coords
    g = geometric_graph_from_coords(coords, 2.0, 0.18)
    lap = laplacians(g)
    approx = chebyshev_fit(FilterSpec.lowpass(), 17, lap.lambda_max)
    f = coords[:, 0] ** 2 + coords[:, 1] ** 2 - 1
    r = ex.run_error_propagation_study(g, node, approx, f)
    pair = {node, int(g.neighbors(node)[0])}
    outside = [n for n in range(50) if n not in pair]
    assert np.all(r.output_error[outside] == 0)
    assert np.any(r.output_error[list(pair)] != 0)


def test_complete_family_zero_spread():
    rows = ex.run_allocation_stats({"kind": "complete", "n": 12}, samples=30)
    assert max(r["x_var"] for r in rows) < 1e-20


def test_stats_sample_minimum():
    with pytest.raises(ValueError):
        ex.run_allocation_stats({"kind": "geometric"}, samples=10)


def write_rows(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["station_id", "latitude", "longitude", "date", "value"])
        w.writerows(rows)


def test_ingest_two_stations(tmp_path):
    # 10 km apart along a meridian
    dlat = 10.0 / ex.KM_PER_DEGREE
    p = tmp_path / "s.csv"
    write_rows(p, [["A", 0.0, 0.0, "2010-01-01", 1.0], ["A", 0.0, 0.0, "2010-01-02", 3.0],
                   ["B", dlat, 0.0, "2010-01-01", 5.0], ["C", 5.0, 5.0, "2009-01-01", 9.0]])
    g, signal, ids = ex.ingest_station_csv(p, 2010, theta=0.05, kappa_km=50.0)
    assert ids == ["A", "B"]
    np.testing.assert_allclose(signal, [2.0, 5.0])
    expect = np.exp(-((10.0 / ex.KM_PER_DEGREE) ** 2) / 0.05)
    assert g.weights[0, 1] == pytest.approx(expect, rel=1e-9)


def test_ingest_errors(tmp_path):
    p = tmp_path / "bad.csv"
    write_rows(p, [["A", 0.0, 0.0, "2010-01-01", 1.0], ["B", "north", 0.0, "2010-01-01", 1.0]])
    with pytest.raises(ValueError, match=r"bad.csv:3"):
        ex.ingest_station_csv(p, 2010, 0.05, 50.0)
    far = tmp_path / "far.csv"
    write_rows(far, [["A", 0.0, 0.0, "2010-01-01", 1.0], ["B", 5.0, 0.0, "2010-01-01", 1.0]])
    with pytest.raises(GraphError, match="kappa"):
        ex.ingest_station_csv(far, 2010, 0.05, 50.0)


def test_synthetic_fixture_roundtrip(tmp_path):
    p = tmp_path / "st.csv"
    ex.write_synthetic_stations(p, n_stations=60, days=3, missing_stations=2, seed=1)
    g, signal, ids = ex.ingest_station_csv(p, 2010, 0.05, 600.0)
    assert len(ids) == 58 and "S0000" not in ids
    assert np.all(np.isfinite(signal))


def test_write_results(tmp_path):
    res = ex.run_mse_sweep(small_cfg(trials=2))
    csv_path, man_path = ex.write_results(res, tmp_path / "out")
    import json
    man = json.loads(man_path.read_text())
    assert man["config_hash"] == res.config.digest() and man["seed"] == 0
    assert csv_path.read_text() == res.to_csv()
