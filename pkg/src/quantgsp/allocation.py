"""Error-propagation operators, the expected-MSE model and optimal bit allocation."""

from __future__ import annotations

import csv
import heapq
import io
import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

LN2 = np.log(2.0)


class InfeasibleBudget(ValueError):
    """The budget cannot give every message its one-bit minimum."""


def _alpha(approx) -> np.ndarray:
    a = getattr(approx, "alpha", approx)
    return np.asarray(a, dtype=float)


def shifted_powers(L: np.ndarray, K: int) -> list[np.ndarray]:
    """``[(L - I)^0, ..., (L - I)^K]``."""
    S = L - np.eye(L.shape[0])
    powers = [np.eye(L.shape[0])]
    for _ in range(K):
        powers.append(powers[-1] @ S)
    return powers


def hk_coefficients(alpha, k: int) -> np.ndarray:
    """Weights ``w_j`` with ``H_k = sum_{j>=1} w_j (L - I)^j``.

    ``w_j = sum_{i=j}^{K-k} alpha_{k+i} C(k+i, k+j)``; index 0 is unused.
    """
    alpha = _alpha(alpha)
    K = len(alpha) - 1
    w = np.zeros(K - k + 1)
    for j in range(1, K - k + 1):
        w[j] = sum(alpha[k + i] * comb(k + i, k + j) for i in range(j, K - k + 1))
    return w


def compute_Hk(approx, L: np.ndarray, K: int | None = None,
               powers: list[np.ndarray] | None = None) -> list[np.ndarray]:
    """Matrices ``H_0 .. H_{K-1}`` mapping the step-k error vector to the output error.

    ``H_k = sum_{i=1}^{K-k} alpha_{k+i} sum_{j=1}^{i} C(k+i, k+j) (L - I)^j``.
    """
    alpha = _alpha(approx)
    if K is None:
        K = len(alpha) - 1
    if K != len(alpha) - 1:
        raise ValueError("K must equal the filter order")
    if powers is None:
        powers = shifted_powers(L, K)
    H = []
    for k in range(K):
        w = hk_coefficients(alpha, k)
        Hk = np.zeros_like(L, dtype=float)
        for j in range(1, K - k + 1):
            Hk += w[j] * powers[j]
        H.append(Hk)
    return H


def compute_F(H: list[np.ndarray]) -> np.ndarray:
    """Sensitivities ``F[k, n] = (H_k^T H_k)[n, n]``, shape (K, N)."""
    return np.array([np.einsum("mn,mn->n", Hk, Hk) for Hk in H])


def unbounded_error_operators(approx, L: np.ndarray) -> list[np.ndarray]:
    """Matrices ``sum_{j=1}^{K-k} alpha_{k+j} L^j`` for the unbounded iteration."""
    alpha = _alpha(approx)
    K = len(alpha) - 1
    powers = [np.eye(L.shape[0])]
    for _ in range(K):
        powers.append(powers[-1] @ L)
    out = []
    for k in range(K):
        M = np.zeros_like(L, dtype=float)
        for j in range(1, K - k + 1):
            M += alpha[k + j] * powers[j]
        out.append(M)
    return out


@dataclass
class ErrorModel:
    H: list
    F: np.ndarray
    alpha: np.ndarray
    graph_ref: str = ""

    @classmethod
    def build(cls, approx, L: np.ndarray, graph_ref: str = "") -> "ErrorModel":
        H = compute_Hk(approx, L)
        return cls(H, compute_F(H), _alpha(approx), graph_ref)

    def f_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node", "step", "F"])
        K, N = self.F.shape
        for n in range(N):
            for k in range(K):
                w.writerow([n, k, repr(float(self.F[k, n]))])
        return buf.getvalue()


def _range_sq(R, K: int) -> np.ndarray:
    """Squared quantizer range per step; ``R`` is a scalar or a length-K vector."""
    R = np.asarray(R, dtype=float)
    if R.ndim == 0:
        return np.full(K, float(R) ** 2)
    if R.shape != (K,):
        raise ValueError(f"range must be a scalar or have length {K}")
    return R**2


def expected_mse(F: np.ndarray, bits: np.ndarray, R) -> float:
    """Expected ``||output error||^2`` under the white-noise model.

    ``F`` is (K, N), ``bits`` is (N, K); ``R`` is the quantizer range, either
    shared by all steps or one value per step.
    """
    F = np.asarray(F, dtype=float)
    bits = np.asarray(bits, dtype=float)
    r2 = _range_sq(R, F.shape[0])
    return float(np.sum((F * r2[:, None]).T / 3.0 * np.exp2(-2.0 * bits)))


@dataclass
class AllocationPlan:
    bits: np.ndarray                      # (N, K) integer bits
    budget: float
    degrees: np.ndarray
    mu: float = float("nan")
    log_mu: float = float("nan")
    real_valued: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def cost(self) -> float:
        return float(np.sum(np.asarray(self.bits, dtype=float) * self.degrees[:, None]))

    @property
    def real_cost(self) -> float:
        return float(np.sum(self.real_valued * self.degrees[:, None]))

    @property
    def bits_per_message(self) -> float:
        return self.cost / (self.bits.shape[1] * float(self.degrees.sum()))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node", "step", "bits"])
        N, K = self.bits.shape
        for n in range(N):
            for k in range(K):
                w.writerow([n, k, int(self.bits[n, k])])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "bits": np.asarray(self.bits).astype(int).tolist(),
            "budget": self.budget,
            "cost": self.cost,
            "degrees": self.degrees.astype(int).tolist(),
            "mu": None if not np.isfinite(self.mu) else self.mu,
            "log_mu": None if not np.isfinite(self.log_mu) else self.log_mu,
            "real_valued": None if self.real_valued is None else self.real_valued.tolist(),
        }

    @classmethod
    def from_csv(cls, text: str, degrees, budget: float = float("nan")) -> "AllocationPlan":
        rows = list(csv.DictReader(io.StringIO(text)))
        N = max(int(r["node"]) for r in rows) + 1
        K = max(int(r["step"]) for r in rows) + 1
        bits = np.zeros((N, K), dtype=np.int64)
        for r in rows:
            bits[int(r["node"]), int(r["step"])] = int(r["bits"])
        return cls(bits, budget, np.asarray(degrees))

    @classmethod
    def from_json(cls, obj) -> "AllocationPlan":
        if isinstance(obj, str):
            obj = json.loads(obj)
        rv = obj.get("real_valued")
        return cls(np.asarray(obj["bits"], dtype=np.int64), obj["budget"],
                   np.asarray(obj["degrees"]),
                   obj.get("mu") if obj.get("mu") is not None else float("nan"),
                   obj.get("log_mu") if obj.get("log_mu") is not None else float("nan"),
                   None if rv is None else np.asarray(rv, dtype=float))


def _check_budget(B: float, degrees: np.ndarray, K: int) -> None:
    minimum = K * float(np.sum(degrees))
    if not B >= minimum:
        raise InfeasibleBudget(
            f"infeasible budget: B={B} is below the one-bit minimum {minimum:g}")


def kkt_allocate(F: np.ndarray, degrees, B: float, R) -> AllocationPlan:
    """Closed-form real-valued KKT allocation minimizing :func:`expected_mse`.

    Messages with ``F[k, n] == 0`` do not affect the output; they get the
    one-bit floor and the remaining budget is split among the others. A
    per-step range enters exactly like a per-step scaling of ``F``.
    """
    F = np.asarray(F, dtype=float)
    K, N = F.shape
    r2 = _range_sq(R, K)
    d = np.asarray(degrees, dtype=float)
    if np.any(d < 1):
        raise ValueError("every node needs at least one neighbour")
    _check_budget(B, d, K)
    active = (F > 0).T                          # (N, K)
    dd = np.broadcast_to(d[:, None], (N, K))
    x = np.ones((N, K))
    B_active = B - float(np.sum(dd[~active]))
    if not active.any():
        return AllocationPlan(x.astype(np.int64), B, d.astype(np.int64), real_valued=x)
    # a[n, k] = ln(3 d[n] / (2 R^2 ln2 F_k[n])); everything stays in log space
    r2nk = np.broadcast_to(r2[None, :], (N, K))
    a = np.log(3.0 * dd[active]) - np.log(2.0 * r2nk[active] * LN2) - np.log(F.T[active])
    wsum = float(np.sum(dd[active]))
    log_mu = -(B_active * np.log(4.0) + float(np.sum(dd[active] * a))) / wsum
    x[active] = -(log_mu + a) / (2.0 * LN2)
    mu = float(np.exp(log_mu)) if log_mu < 700 else float("inf")
    return AllocationPlan(np.maximum(1, np.floor(x + 0.5)).astype(np.int64), B,
                          d.astype(np.int64), mu, log_mu, x)


def round_half_up(x) -> np.ndarray:
    return np.floor(np.asarray(x, dtype=float) + 0.5)


def integerize(plan: AllocationPlan, F: np.ndarray | None = None, repair: bool = False,
               R=1.0) -> AllocationPlan:
    """Round the real-valued plan half-up and floor at one bit.

    With ``repair=True`` (needs ``F``) bits are then removed one at a time from
    the message whose removal raises the expected MSE least per bit of cost
    saved, until the cost fits the budget.
    """
    if plan.real_valued is None:
        raise ValueError("plan has no real-valued solution")
    bits = np.maximum(1, round_half_up(plan.real_valued)).astype(np.int64)
    out = AllocationPlan(bits, plan.budget, plan.degrees, plan.mu, plan.log_mu,
                         plan.real_valued, dict(plan.meta))
    if repair:
        if F is None:
            raise ValueError("budget repair needs the sensitivities F")
        _greedy_repair(out, np.asarray(F, dtype=float), R)
    out.meta["actual_cost"] = out.cost
    return out


def _greedy_repair(plan: AllocationPlan, F: np.ndarray, R) -> None:
    bits = plan.bits
    d = plan.degrees.astype(float)
    Ft = (F * _range_sq(R, F.shape[0])[:, None]).T

    def penalty(n, k):
        b = bits[n, k]
        return Ft[n, k] / 3.0 * (np.exp2(-2.0 * (b - 1)) - np.exp2(-2.0 * b)) / d[n]

    heap = [(penalty(n, k), n, k) for n, k in zip(*np.nonzero(bits > 1))]
    heapq.heapify(heap)
    cost = plan.cost
    while cost > plan.budget and heap:
        _, n, k = heapq.heappop(heap)
        bits[n, k] -= 1
        cost -= d[n]
        if bits[n, k] > 1:
            heapq.heappush(heap, (penalty(n, k), n, k))


def uniform_allocate(B: float, degrees, K: int) -> AllocationPlan:
    """Same bit count for every message: ``round(B / (K * sum(d)))``."""
    d = np.asarray(degrees)
    _check_budget(B, d, K)
    b = max(1, int(round_half_up(B / (K * float(d.sum())))))
    N = len(d)
    return AllocationPlan(np.full((N, K), b, dtype=np.int64), B, d.astype(np.int64),
                          real_valued=np.full((N, K), B / (K * float(d.sum()))))


def kkt_allocate_numeric(F: np.ndarray, degrees, B: float, R,
                         tol: float = 1e-13) -> np.ndarray:
    """Reference solver: nested bisection on the KKT system, no closed form.

    The outer loop bisects ``log mu`` until the budget holds; for each trial
    ``mu`` the inner loop bisects every ``x[n, k]`` on the stationarity
    equation ``(2 ln2 R^2 / 3) F 2^(-2x) = mu d`` (the derivative is monotone).
    Returns the (N, K) real allocation; zero-F messages are pinned at one bit.
    """
    F = np.asarray(F, dtype=float)
    r2 = _range_sq(R, F.shape[0])
    F = F.T
    N, K = F.shape
    d = np.broadcast_to(np.asarray(degrees, dtype=float)[:, None], (N, K))
    active = F > 0
    Fa, da = (F * r2[None, :])[active], d[active]
    B_active = B - float(np.sum(d[~active]))
    c = 2.0 * LN2 / 3.0

    def x_of(log_mu):
        lo = np.full(Fa.shape, -200.0)
        hi = np.full(Fa.shape, 200.0)
        target = np.exp(log_mu) * da
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            grad = c * Fa * np.exp2(-2.0 * mid)
            # grad decreases in x: too steep means x must grow
            bigger = grad > target
            lo = np.where(bigger, mid, lo)
            hi = np.where(bigger, hi, mid)
            if np.max(hi - lo) < tol:
                break
        return 0.5 * (lo + hi)

    lo, hi = -300.0, 300.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        spend = float(np.sum(x_of(mid) * da))
        # larger mu means fewer bits
        if spend > B_active:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    x = np.ones((N, K))
    x[active] = x_of(0.5 * (lo + hi))
    return x
