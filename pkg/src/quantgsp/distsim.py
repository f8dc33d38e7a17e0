"""Synchronous message-passing simulation of distributed polynomial graph filters.

Three schemes are supported:

* ``exact``: nodes iterate ``z_{k+1} = L z_k`` without quantization.
* ``unbounded``: the same iteration, but every transmitted ``z_k[n]`` is
  quantized with range ``lambda_max**k * ||f||_2``.
* ``bounded``: nodes iterate the shifted operator ``L - I`` (spectrum in
  ``[-1, 1]``), quantize every transmitted value with range ``||f||_inf`` and
  recover ``z_k = sum_i C(k, i) zdot_i`` locally.

In every scheme a node keeps its own unquantized values for its local state;
only what goes on the wire carries quantization error.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Callable

import numpy as np

from .filter_design import FilterApprox
from .graph_core import Graph, LaplacianPair, laplacians
from .quantizer import quantize_array

SCHEMES = ("exact", "unbounded", "bounded")


@dataclass
class SimulationTrace:
    scheme: str
    messages: np.ndarray      # (K, N) values on the wire
    errors: np.ndarray        # (K, N) injected error per message
    z_history: np.ndarray     # (K+1, N) recovered z_k
    output: np.ndarray        # (N,)
    zdot_history: np.ndarray | None = None

    def to_json(self) -> dict:
        d = {"scheme": self.scheme, "messages": self.messages.tolist(),
             "errors": self.errors.tolist(), "z_history": self.z_history.tolist(),
             "output": self.output.tolist()}
        if self.zdot_history is not None:
            d["zdot_history"] = self.zdot_history.tolist()
        return d

    def dump(self, path) -> None:
        """Write the trace as JSON, or as long-format CSV if ``path`` ends in .csv."""
        path = Path(path)
        if path.suffix == ".csv":
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["quantity", "step", "node", "value"])
                for name in ("messages", "errors", "z_history"):
                    arr = getattr(self, name)
                    for k, n in np.ndindex(arr.shape):
                        w.writerow([name, k, n, repr(float(arr[k, n]))])
                for n, v in enumerate(self.output):
                    w.writerow(["output", "", n, repr(float(v))])
        else:
            path.write_text(json.dumps(self.to_json()))


@dataclass
class NodeState:
    """Per-node view: the node sees only its own row of the operator and its inbox."""

    node_id: int
    neighbors: np.ndarray
    self_coef: float
    neighbor_coefs: np.ndarray
    accumulated_output: float = 0.0
    zdot_history: list = field(default_factory=list)
    neighbor_inbox: np.ndarray = field(default_factory=lambda: np.empty(0))

    def receive(self, broadcast: np.ndarray) -> None:
        # only neighbours' transmissions reach this node
        self.neighbor_inbox = broadcast[self.neighbors]

    def local_update(self, own_message: float) -> float:
        return self.self_coef * own_message + float(self.neighbor_coefs @ self.neighbor_inbox)


def build_nodes(g: Graph, operator: np.ndarray) -> list[NodeState]:
    nodes = []
    for n in range(g.n_nodes):
        nb = g.neighbors(n)
        nodes.append(NodeState(n, nb, float(operator[n, n]), operator[n, nb].copy()))
    return nodes


def _round(nodes: list[NodeState], wire: np.ndarray) -> np.ndarray:
    """One synchronous round: every node broadcasts, then every node computes."""
    for node in nodes:
        node.receive(wire)
    return np.array([node.local_update(wire[node.node_id]) for node in nodes])


Transmit = Callable[[int, np.ndarray], np.ndarray]


def _noiseless(k, values):
    return values


def _simulate_plain(g, alpha, f, operator, transmit: Transmit, scheme: str) -> SimulationTrace:
    K = len(alpha) - 1
    N = g.n_nodes
    nodes = build_nodes(g, operator)
    z = np.asarray(f, dtype=float).copy()
    messages = np.zeros((K, N))
    errors = np.zeros((K, N))
    z_hist = np.zeros((K + 1, N))
    z_hist[0] = z
    for node in nodes:
        node.accumulated_output = alpha[0] * z[node.node_id]
    for k in range(K):
        wire = transmit(k, z)
        messages[k] = wire
        errors[k] = wire - z
        z = _round(nodes, wire)
        z_hist[k + 1] = z
        for node in nodes:
            node.accumulated_output += alpha[k + 1] * z[node.node_id]
    out = np.array([node.accumulated_output for node in nodes])
    return SimulationTrace(scheme, messages, errors, z_hist, out)


def _simulate_bounded(g, alpha, f, shifted, transmit: Transmit) -> SimulationTrace:
    K = len(alpha) - 1
    N = g.n_nodes
    nodes = build_nodes(g, shifted)
    binom = [[comb(k, i) for i in range(k + 1)] for k in range(K + 1)]
    zdot = np.asarray(f, dtype=float).copy()
    messages = np.zeros((K, N))
    errors = np.zeros((K, N))
    z_hist = np.zeros((K + 1, N))
    zdot_hist = np.zeros((K + 1, N))
    z_hist[0] = zdot_hist[0] = zdot
    for node in nodes:
        node.zdot_history = [zdot[node.node_id]]
        node.accumulated_output = alpha[0] * zdot[node.node_id]
    for k in range(K):
        wire = transmit(k, zdot)
        messages[k] = wire
        errors[k] = wire - zdot
        zdot = _round(nodes, wire)
        zdot_hist[k + 1] = zdot
        c = binom[k + 1]
        for node in nodes:
            hist = node.zdot_history
            hist.append(zdot[node.node_id])
            zk = sum(ci * hi for ci, hi in zip(c, hist))
            z_hist[k + 1, node.node_id] = zk
            node.accumulated_output += alpha[k + 1] * zk
    out = np.array([node.accumulated_output for node in nodes])
    return SimulationTrace("bounded", messages, errors, z_hist, out, zdot_hist)


def _alpha(approx) -> np.ndarray:
    return approx.alpha if isinstance(approx, FilterApprox) else np.asarray(approx, dtype=float)


def _lap(g: Graph, lap: LaplacianPair | None) -> LaplacianPair:
    return laplacians(g) if lap is None else lap


def _check_plan(bits, N: int, K: int) -> np.ndarray:
    b = np.asarray(getattr(bits, "bits", bits))
    if b.shape != (N, K):
        raise ValueError(f"allocation must have shape ({N}, {K}), got {b.shape}")
    if np.any(b < 1):
        raise ValueError("every message needs at least one bit")
    return b.astype(np.int64)


def run_exact(g: Graph, approx, f_in, lap: LaplacianPair | None = None) -> SimulationTrace:
    lap = _lap(g, lap)
    return _simulate_plain(g, _alpha(approx), f_in, lap.normalized, _noiseless, "exact")


def unbounded_ranges(lambda_max: float, f_in, K: int) -> np.ndarray:
    """Per-step quantizer range ``lambda_max**k * ||f||_2`` for the unbounded baseline."""
    return lambda_max ** np.arange(K) * float(np.linalg.norm(f_in))


def run_unbounded_quantized(g: Graph, approx, f_in, plan, lap: LaplacianPair | None = None,
                            ranges=None) -> SimulationTrace:
    lap = _lap(g, lap)
    alpha = _alpha(approx)
    K = len(alpha) - 1
    bits = _check_plan(plan, g.n_nodes, K)
    R = unbounded_ranges(lap.lambda_max, f_in, K) if ranges is None else np.broadcast_to(
        np.asarray(ranges, dtype=float), (K,))

    def transmit(k, values):
        return quantize_array(values, R[k], bits[:, k])

    return _simulate_plain(g, alpha, f_in, lap.normalized, transmit, "unbounded")


def run_bounded_quantized(g: Graph, approx, f_in, plan, lap: LaplacianPair | None = None,
                          range_=None) -> SimulationTrace:
    """Bounded scheme.

    ``range_`` is the quantizer range, a scalar or one value per step; it
    defaults to ``||f_in||_inf`` for every step.
    """
    lap = _lap(g, lap)
    alpha = _alpha(approx)
    K = len(alpha) - 1
    bits = _check_plan(plan, g.n_nodes, K)
    R = float(np.max(np.abs(f_in))) if range_ is None else range_
    R = np.broadcast_to(np.asarray(R, dtype=float), (K,))

    def transmit(k, values):
        return quantize_array(values, R[k], bits[:, k])

    return _simulate_bounded(g, alpha, f_in, lap.shifted, transmit)


def run_with_injected_errors(g: Graph, approx, f_in, eps, scheme: str = "bounded",
                             lap: LaplacianPair | None = None) -> SimulationTrace:
    """Run ``scheme`` with each transmitted value perturbed by exactly ``eps[k, n]``."""
    lap = _lap(g, lap)
    alpha = _alpha(approx)
    K = len(alpha) - 1
    eps = np.asarray(eps, dtype=float)
    if eps.shape != (K, g.n_nodes):
        raise ValueError(f"eps must have shape ({K}, {g.n_nodes})")
    if not np.all(np.isfinite(eps)):
        raise ValueError("eps must be finite")

    def transmit(k, values):
        return values + eps[k]

    if scheme == "bounded":
        return _simulate_bounded(g, alpha, f_in, lap.shifted, transmit)
    if scheme == "unbounded":
        return _simulate_plain(g, alpha, f_in, lap.normalized, transmit, "unbounded")
    if scheme == "exact":
        if np.any(eps != 0):
            raise ValueError("the exact scheme cannot carry injected errors")
        return run_exact(g, alpha, f_in, lap)
    raise ValueError(f"unknown scheme {scheme!r}")

