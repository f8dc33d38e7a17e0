"""Graph construction, normalized/shifted Laplacians and topology statistics."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import connected_components

DEFAULT_RETRIES = 100


class GraphError(ValueError):
    """Raised when a graph cannot be built or violates a structural requirement."""


@dataclass(frozen=True)
class Graph:
    """Weighted undirected graph.

    ``degrees`` counts neighbours (the per-node transmission cost); the
    weighted degree used by the Laplacian is ``weights.sum(axis=1)``.
    """

    weights: np.ndarray
    coords: np.ndarray | None = None
    degrees: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise GraphError("weights must be a square matrix")
        if not np.array_equal(w, w.T):
            raise GraphError("weights must be symmetric")
        if np.any(np.diag(w) != 0):
            raise GraphError("weights must have a zero diagonal")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise GraphError("weights must be finite and nonnegative")
        object.__setattr__(self, "weights", w)
        if self.coords is not None:
            c = np.asarray(self.coords, dtype=float)
            if c.shape != (w.shape[0], 2):
                raise GraphError("coords must have shape (n, 2)")
            object.__setattr__(self, "coords", c)
        object.__setattr__(self, "degrees", np.count_nonzero(w > 0, axis=1))

    @property
    def n_nodes(self) -> int:
        return self.weights.shape[0]

    @property
    def weighted_degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def neighbors(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.weights[i] > 0)

    def is_connected(self) -> bool:
        n_comp, _ = connected_components(self.weights > 0, directed=False)
        return n_comp == 1

    def to_json(self) -> dict:
        iu, ju = np.nonzero(np.triu(self.weights, k=1))
        return {
            "n": self.n_nodes,
            "coords": None if self.coords is None else self.coords.tolist(),
            "edges": [[int(i), int(j), float(self.weights[i, j])] for i, j in zip(iu, ju)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Graph":
        n = int(obj["n"])
        if n < 1:
            raise GraphError("n must be positive")
        w = np.zeros((n, n))
        for i, j, wij in obj["edges"]:
            i, j = int(i), int(j)
            if not 0 <= i < j < n:
                raise GraphError(f"edge ({i}, {j}) must satisfy 0 <= i < j < n")
            if wij <= 0:
                raise GraphError(f"edge ({i}, {j}) has nonpositive weight")
            w[i, j] = w[j, i] = float(wij)
        return cls(w, obj.get("coords"))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()))

    @classmethod
    def load(cls, path) -> "Graph":
        return cls.from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class LaplacianPair:
    normalized: np.ndarray
    shifted: np.ndarray
    lambda_max: float


def _as_rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def kernel_weights(dist: np.ndarray, theta: float, kappa: float) -> np.ndarray:
    """Thresholded Gaussian kernel ``exp(-l**2 / theta)`` for ``l <= kappa``."""
    w = np.where(dist <= kappa, np.exp(-dist**2 / theta), 0.0)
    np.fill_diagonal(w, 0.0)
    return w


def geometric_graph_from_coords(coords, theta: float, kappa: float) -> Graph:
    """Thresholded Gaussian kernel graph on fixed coordinates (may be disconnected)."""
    if theta <= 0 or kappa <= 0:
        raise GraphError("theta and kappa must be positive")
    c = np.asarray(coords, dtype=float)
    diff = c[:, None, :] - c[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=-1))
    return Graph(kernel_weights(dist, theta, kappa), c)


def build_geometric_graph(n: int, theta: float, kappa: float, seed=None,
                          retries: int = DEFAULT_RETRIES) -> Graph:
    """Random geometric graph in the unit square with Gaussian kernel weights.

    Coordinates are redrawn from child seeds of ``seed`` until the graph is
    connected; after ``retries`` failures a :class:`GraphError` is raised.
    """
    if n < 2:
        raise GraphError("n must be at least 2")
    if theta <= 0 or kappa <= 0:
        raise GraphError("theta and kappa must be positive")
    if isinstance(seed, np.random.Generator):
        children = None
    else:
        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        children = ss.spawn(retries)
    for attempt in range(retries):
        rng = seed if children is None else np.random.default_rng(children[attempt])
        g = geometric_graph_from_coords(rng.uniform(0.0, 1.0, size=(n, 2)), theta, kappa)
        if g.is_connected():
            return g
    raise GraphError(
        f"no connected graph with n={n}, kappa={kappa} after {retries} draws; "
        "parameters too sparse")


def is_graphical(seq) -> bool:
    """Erdős–Gallai test for a simple-graph degree sequence."""
    d = np.sort(np.asarray(seq, dtype=np.int64))[::-1]
    if np.any(d < 0) or d.sum() % 2:
        return False
    n = len(d)
    csum = np.cumsum(d)
    for k in range(1, n + 1):
        rhs = k * (k - 1) + np.minimum(d[k:], k).sum()
        if csum[k - 1] > rhs:
            return False
    return True


def _match_stubs(degrees, rng: np.random.Generator, max_rounds: int = 50):
    """Configuration-model stub matching with self-loop/multi-edge rejection.

    Rejected pairs return their stubs to the pool, which is reshuffled. Returns
    an edge set, or None when the remaining stubs cannot be paired.
    """
    stubs = np.repeat(np.arange(len(degrees)), degrees)
    edges: set[tuple[int, int]] = set()
    for _ in range(max_rounds):
        if stubs.size == 0:
            return edges
        rng.shuffle(stubs)
        leftover = []
        for a, b in zip(stubs[0::2], stubs[1::2]):
            a, b = (int(a), int(b)) if a < b else (int(b), int(a))
            if a != b and (a, b) not in edges:
                edges.add((a, b))
            else:
                leftover.extend((a, b))
        stubs = np.array(leftover, dtype=np.int64)
        if stubs.size and not _pairable(stubs, edges):
            return None
    return None


def _pairable(stubs: np.ndarray, edges) -> bool:
    nodes = np.unique(stubs)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if (int(a), int(b)) not in edges:
                return True
    return False


def graph_from_degree_sequence(degrees, seed=None, attempts: int = 20) -> Graph | None:
    """Unit-weight simple graph realizing ``degrees`` via stub matching, or None."""
    degrees = np.asarray(degrees, dtype=np.int64)
    rng = _as_rng(seed)
    n = len(degrees)
    for _ in range(attempts):
        edges = _match_stubs(degrees, rng)
        if edges is not None:
            w = np.zeros((n, n))
            for a, b in edges:
                w[a, b] = w[b, a] = 1.0
            return Graph(w)
    return None


def sample_degree_sequence(n: int, trials: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Binomial degree sample, parity-repaired by bumping one random entry."""
    seq = rng.binomial(trials, p, size=n)
    if seq.sum() % 2:
        seq[rng.integers(n)] += 1
    return seq


def build_binomial_degree_graph(n: int, trials: int, p: float, seed=None,
                                retries: int = DEFAULT_RETRIES) -> Graph:
    """Connected unit-weight graph whose degrees follow Binomial(trials, p)."""
    if n < 2:
        raise GraphError("n must be at least 2")
    if not 0 < p < 1 or trials < 1:
        raise GraphError("need trials >= 1 and 0 < p < 1")
    rng = _as_rng(seed)
    for _ in range(retries):
        seq = sample_degree_sequence(n, trials, p, rng)
        if np.any(seq == 0) or not is_graphical(seq):
            continue
        g = graph_from_degree_sequence(seq, rng)
        if g is not None and g.is_connected():
            return g
    raise GraphError(
        f"no connected graphical realization for Binomial({trials}, {p}) "
        f"after {retries} samples")


def laplacians(g: Graph) -> LaplacianPair:
    """Normalized Laplacian ``I - D^-1/2 W D^-1/2``, its shift ``L - I`` and lambda_max."""
    wdeg = g.weighted_degrees
    if np.any(wdeg <= 0):
        raise GraphError(f"isolated node(s): {np.flatnonzero(wdeg <= 0).tolist()}")
    s = 1.0 / np.sqrt(wdeg)
    adj = s[:, None] * g.weights * s[None, :]
    adj = 0.5 * (adj + adj.T)
    n = g.n_nodes
    lap = np.eye(n) - adj
    lam = float(np.linalg.eigvalsh(lap)[-1])
    return LaplacianPair(lap, -adj, lam)


def eccentricities(g: Graph) -> np.ndarray:
    """Hop-count eccentricity of every node (breadth-first search from each)."""
    n = g.n_nodes
    nbrs = [g.neighbors(i) for i in range(n)]
    ecc = np.empty(n, dtype=np.int64)
    for src in range(n):
        dist = np.full(n, -1, dtype=np.int64)
        dist[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        if np.any(dist < 0):
            raise GraphError("graph is disconnected: eccentricity is infinite")
        ecc[src] = dist.max()
    return ecc


def message_bound(g: Graph | float, f, k: int) -> float:
    """A-priori bound ``lambda_max**k * ||f||_2`` on ``||L^k f||_inf``.

    ``g`` may be a :class:`Graph` or an already computed lambda_max.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    lam = laplacians(g).lambda_max if isinstance(g, Graph) else float(g)
    return lam**k * float(np.linalg.norm(f))
