"""Spectral transfer functions and their monomial polynomial approximations."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

MAX_ORDER = 30


@dataclass(frozen=True)
class FilterSpec:
    """A scalar transfer function ``g(lambda)`` plus the parameters that define it."""

    kind: str
    params: dict = field(default_factory=dict)
    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def eval(self, lam):
        lam = np.asarray(lam, dtype=float)
        p = self.params
        if self.kind == "lowpass_denoise":
            return p["tau"] / (p["tau"] + p.get("scale", 5.0) * lam)
        if self.kind == "tikhonov":
            return p["tau"] / (p["tau"] + 2.0 * lam ** p["r"])
        if self.kind == "heat":
            return np.exp(-p["tau"] * lam / p["lambda_max"])
        if self.kind == "custom":
            return np.broadcast_to(np.asarray(self.func(lam), dtype=float), lam.shape)
        raise ValueError(f"unknown filter kind {self.kind!r}")

    @classmethod
    def lowpass(cls, tau: float = 3.0, scale: float = 5.0) -> "FilterSpec":
        return cls("lowpass_denoise", {"tau": tau, "scale": scale})

    @classmethod
    def tikhonov(cls, tau: float = 10.0, r: int = 1) -> "FilterSpec":
        return cls("tikhonov", {"tau": tau, "r": int(r)})

    @classmethod
    def heat(cls, tau: float, lambda_max: float) -> "FilterSpec":
        return cls("heat", {"tau": tau, "lambda_max": lambda_max})

    @classmethod
    def custom(cls, func) -> "FilterSpec":
        return cls("custom", {}, func)

    @classmethod
    def from_dict(cls, d: dict, lambda_max: float | None = None) -> "FilterSpec":
        """Build from a config mapping; heat filters take the graph's lambda_max."""
        kind = d.get("kind", "lowpass_denoise")
        if kind == "lowpass_denoise":
            return cls.lowpass(d.get("tau", 3.0), d.get("scale", 5.0))
        if kind == "tikhonov":
            return cls.tikhonov(d.get("tau", 10.0), d.get("r", 1))
        if kind == "heat":
            lm = d.get("lambda_max", lambda_max)
            if lm is None:
                raise ValueError("heat filter needs lambda_max")
            return cls.heat(d.get("tau", 1.0), lm)
        raise ValueError(f"unknown filter kind {kind!r}")


@dataclass(frozen=True)
class FilterApprox:
    """Monomial coefficients ``alpha[k]`` of ``sum_k alpha[k] L^k``."""

    alpha: np.ndarray
    domain_max: float
    fit_error: float = float("nan")

    @property
    def order(self) -> int:
        return len(self.alpha) - 1

    def __call__(self, lam):
        return np.polynomial.polynomial.polyval(lam, self.alpha)

    def to_json(self) -> dict:
        return {"alpha": list(map(float, self.alpha)), "order": self.order,
                "domain_max": self.domain_max}

    @classmethod
    def from_json(cls, obj) -> "FilterApprox":
        if isinstance(obj, str):
            obj = json.loads(obj)
        alpha = np.asarray(obj["alpha"], dtype=float)
        if "order" in obj and obj["order"] != len(alpha) - 1:
            raise ValueError("order does not match alpha length")
        return cls(alpha, float(obj["domain_max"]))


def chebyshev_coefficients(g, K: int, lambda_max: float, M: int = 1000) -> np.ndarray:
    """Shifted-Chebyshev coefficients of ``g`` on ``[0, lambda_max]``.

    Uses the cosine quadrature ``c_j = 2/M sum_m g(x_m) cos(j theta_m)``; the
    series is ``c_0/2 + sum_{j>=1} c_j T_j((2 lam - lambda_max)/lambda_max)``.
    """
    if M < K + 1:
        raise ValueError("need at least K + 1 quadrature points")
    half = lambda_max / 2.0
    theta = np.pi * (np.arange(M) + 0.5) / M
    gx = g(half * np.cos(theta) + half)
    j = np.arange(K + 1)
    return 2.0 / M * np.cos(np.outer(j, theta)) @ gx


def chebyshev_to_monomial(c: np.ndarray, lambda_max: float) -> np.ndarray:
    """Convert the shifted series above to monomial coefficients in ``lam``.

    Runs the three-term recurrence ``T_{j+1} = 2 y T_j - T_{j-1}`` with
    ``y = lam / half - 1`` held as a monomial coefficient vector.
    """
    K = len(c) - 1
    half = lambda_max / 2.0
    y = np.array([-1.0, 1.0 / half])
    alpha = np.zeros(K + 1)
    t_prev = np.array([1.0])
    alpha[0] += c[0] / 2.0
    if K == 0:
        return alpha
    t_cur = y.copy()
    alpha[:2] += c[1] * t_cur
    for jj in range(2, K + 1):
        t_next = 2.0 * np.convolve(y, t_cur)
        t_next[: len(t_prev)] -= t_prev
        alpha[: jj + 1] += c[jj] * t_next
        t_prev, t_cur = t_cur, t_next
    return alpha


def chebyshev_eval(c: np.ndarray, lam, lambda_max: float) -> np.ndarray:
    """Evaluate the shifted series directly (Clenshaw via numpy)."""
    y = np.asarray(lam, dtype=float) / (lambda_max / 2.0) - 1.0
    cc = np.array(c, dtype=float)
    cc[0] /= 2.0
    return np.polynomial.chebyshev.chebval(y, cc)


def chebyshev_fit(spec: FilterSpec | Callable, K: int, lambda_max: float,
                  M: int = 1000, grid: int = 10_000) -> FilterApprox:
    """Order-``K`` Chebyshev approximation of ``spec`` on ``[0, lambda_max]`` in monomial form."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    if K > MAX_ORDER:
        raise ValueError(f"K={K} exceeds {MAX_ORDER}; monomial conversion is ill-conditioned")
    if not 0 < lambda_max <= 2.0 + 1e-9:
        raise ValueError("lambda_max must lie in (0, 2]")
    g = spec.eval if isinstance(spec, FilterSpec) else spec
    c = chebyshev_coefficients(g, K, lambda_max, M)
    alpha = chebyshev_to_monomial(c, lambda_max)
    lam = np.linspace(0.0, lambda_max, grid)
    err = float(np.max(np.abs(np.polynomial.polynomial.polyval(lam, alpha) - g(lam))))
    return FilterApprox(alpha, float(lambda_max), err)


def apply_filter_exact(approx: FilterApprox | np.ndarray, L: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Centralized reference output ``sum_k alpha_k L^k f`` by Horner's rule."""
    alpha = approx.alpha if isinstance(approx, FilterApprox) else np.asarray(approx, dtype=float)
    f = np.asarray(f, dtype=float)
    out = alpha[-1] * f
    for a in alpha[-2::-1]:
        out = L @ out + a * f
    return out
