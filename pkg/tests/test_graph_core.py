import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.sparse.csgraph import floyd_warshall

from quantgsp.graph_core import (Graph, GraphError, build_binomial_degree_graph,
                                 build_geometric_graph, eccentricities,
                                 geometric_graph_from_coords, graph_from_degree_sequence,
                                 is_graphical, laplacians, message_bound,
                                 sample_degree_sequence)


def naive_geometric(coords, theta, kappa):
    # second implementation, plain loops
    n = len(coords)
    w = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            if i != j:
                l = np.hypot(*(coords[i] - coords[j]))
                if l <= kappa:
                    w[i, j] = np.exp(-l * l / theta)
    return w


def test_two_node_edge_weight():
    g = geometric_graph_from_coords(np.array([[0.0, 0.0], [0.1, 0.0]]), 2.0, 0.2)
    assert g.weights[0, 1] == pytest.approx(np.exp(-0.005), rel=1e-14)
    assert list(g.degrees) == [1, 1]


def test_two_node_too_far_is_disconnected():
    g = geometric_graph_from_coords(np.array([[0.0, 0.0], [0.5, 0.0]]), 2.0, 0.2)
    assert not g.is_connected()
    with pytest.raises(GraphError):
        build_geometric_graph(2, 2.0, 0.01, seed=0, retries=5)


def test_geometric_matches_independent_generator():
    g = build_geometric_graph(50, 2.0, 0.2, seed=11)
    assert g.is_connected()
    ref = naive_geometric(g.coords, 2.0, 0.2)
    np.testing.assert_allclose(g.weights, ref, rtol=1e-14, atol=0)
    assert g.degrees.mean() == pytest.approx(np.count_nonzero(ref) / 50)


def test_geometric_seed_reproducible():
    a = build_geometric_graph(30, 2.0, 0.3, seed=4)
    b = build_geometric_graph(30, 2.0, 0.3, seed=4)
    np.testing.assert_array_equal(a.weights, b.weights)


def test_rejects_bad_weights():
    with pytest.raises(GraphError):
        Graph(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(GraphError):
        Graph(np.array([[1.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(GraphError):
        Graph(np.array([[0.0, -1.0], [-1.0, 0.0]]))


def test_json_roundtrip(tmp_path):
    g = build_geometric_graph(12, 2.0, 0.5, seed=1)
    p = tmp_path / "g.json"
    g.save(p)
    h = Graph.load(p)
    np.testing.assert_array_equal(g.weights, h.weights)
    np.testing.assert_array_equal(g.coords, h.coords)
    obj = json.loads(p.read_text())
    assert all(i < j for i, j, _ in obj["edges"])


def test_json_loader_validates():
    with pytest.raises(GraphError):
        Graph.from_json({"n": 2, "coords": None, "edges": [[1, 0, 1.0]]})
    with pytest.raises(GraphError):
        Graph.from_json({"n": 2, "coords": None, "edges": [[0, 1, 0.0]]})


def test_two_node_laplacians():
    g = Graph(np.array([[0.0, 0.37], [0.37, 0.0]]))
    lap = laplacians(g)
    np.testing.assert_allclose(lap.normalized, [[1, -1], [-1, 1]], atol=1e-15)
    np.testing.assert_allclose(lap.shifted, [[0, -1], [-1, 0]], atol=1e-15)
    assert lap.lambda_max == pytest.approx(2.0, abs=1e-12)


def test_triangle_laplacian():
    g = Graph(np.ones((3, 3)) - np.eye(3))
    lap = laplacians(g)
    np.testing.assert_allclose(np.diag(lap.normalized), 1.0)
    assert lap.normalized[0, 1] == pytest.approx(-0.5)
    assert lap.lambda_max == pytest.approx(1.5, abs=1e-12)


def test_isolated_node_rejected():
    w = np.zeros((3, 3))
    w[0, 1] = w[1, 0] = 1.0
    with pytest.raises(GraphError):
        laplacians(Graph(w))


@given(st.integers(0, 10_000))
def test_spectra_and_locality(seed):
    g = build_geometric_graph(20, 2.0, 0.4, seed=seed)
    lap = laplacians(g)
    ev = np.linalg.eigvalsh(lap.normalized)
    assert ev[0] >= -1e-9 and ev[-1] <= 2 + 1e-9
    evs = np.linalg.eigvalsh(lap.shifted)
    assert evs[0] >= -1 - 1e-9 and evs[-1] <= 1 + 1e-9
    mask = (g.weights == 0) & ~np.eye(20, dtype=bool)
    assert np.all(lap.normalized[mask] == 0)
    np.testing.assert_array_equal(g.degrees, (g.weights > 0).sum(axis=1))


def test_eccentricity_small_cases(path3):
    assert list(eccentricities(path3)) == [2, 1, 2]
    assert list(eccentricities(Graph(np.ones((4, 4)) - np.eye(4)))) == [1, 1, 1, 1]


@given(st.integers(0, 10_000), st.integers(5, 20))
def test_eccentricity_vs_floyd_warshall(seed, n):
    g = build_geometric_graph(n, 2.0, 0.5, seed=seed)
    dist = floyd_warshall((g.weights > 0).astype(float), directed=False, unweighted=True)
    np.testing.assert_array_equal(eccentricities(g), dist.max(axis=1).astype(int))


def test_eccentricity_disconnected():
    w = np.zeros((4, 4))
    w[0, 1] = w[1, 0] = w[2, 3] = w[3, 2] = 1.0
    with pytest.raises(GraphError):
        eccentricities(Graph(w))


def test_message_bound_examples():
    g = Graph(np.array([[0.0, 1.0], [1.0, 0.0]]))
    f = np.array([1.0, 0.0])
    assert message_bound(g, f, 0) == pytest.approx(1.0)
    assert message_bound(g, f, 3) == pytest.approx(8.0)


def test_message_bound_monte_carlo():
    g = build_geometric_graph(50, 2.0, 0.2, seed=2)
    lap = laplacians(g)
    rng = np.random.default_rng(0)
    L5 = np.linalg.matrix_power(lap.normalized, 5)
    S5 = np.linalg.matrix_power(lap.shifted, 5)
    for _ in range(1000):
        f = rng.normal(size=50)
        assert np.max(np.abs(L5 @ f)) <= message_bound(lap.lambda_max, f, 5) * (1 + 1e-12)
        assert np.max(np.abs(S5 @ f)) <= np.linalg.norm(f) * (1 + 1e-12)


def test_erdos_gallai():
    assert is_graphical([2, 2, 2])
    assert is_graphical([1, 1, 1, 1])
    assert not is_graphical([3, 1, 1, 0])
    assert not is_graphical([1, 1, 1])


def test_triangle_realization():
    g = graph_from_degree_sequence([2, 2, 2], seed=0)
    np.testing.assert_array_equal(g.weights, np.ones((3, 3)) - np.eye(3))


def test_perfect_matching_is_disconnected():
    g = graph_from_degree_sequence([1, 1, 1, 1], seed=0)
    assert g is not None and not g.is_connected()
    assert g.degrees.sum() == 4


def test_binomial_graph_properties():
    g = build_binomial_degree_graph(50, 20, 0.3, seed=0)
    assert g.is_connected()
    assert set(np.unique(g.weights)) <= {0.0, 1.0}


def test_binomial_degree_mean():
    # mean 6, variance 4.2
    rng = np.random.default_rng(1)
    means = [sample_degree_sequence(50, 20, 0.3, rng).mean() for _ in range(100)]
    assert abs(np.mean(means) - 6.0) <= 0.15 * 6.0
    g_means = [build_binomial_degree_graph(50, 20, 0.3, seed=s).degrees.mean() for s in range(10)]
    assert abs(np.mean(g_means) - 6.0) <= 0.15 * 6.0


@given(st.integers(0, 1000))
def test_degree_sequence_parity(seed):
    seq = sample_degree_sequence(15, 8, 0.4, np.random.default_rng(seed))
    assert seq.sum() % 2 == 0
