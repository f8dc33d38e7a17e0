"""Uniform midrise scalar quantizer and its white-noise error model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuantizerConfig:
    range: float
    bits: int

    def __post_init__(self):
        if not self.range > 0:
            raise ValueError("quantizer range must be positive")
        if int(self.bits) < 1:
            raise ValueError("at least one bit per message is required")

    @property
    def step(self) -> float:
        return step_size(self.range, self.bits)


def step_size(R, bits):
    """Cell width ``2R / 2**bits`` (elementwise)."""
    return np.ldexp(2.0 * np.asarray(R, dtype=float), -np.asarray(bits, dtype=np.int64))


def quantize_array(v, R, bits) -> np.ndarray:
    """Vectorized :func:`quantize`; ``R`` and ``bits`` broadcast against ``v``.

    Inputs outside ``[-R, R)`` saturate to the outermost cell centres.
    """
    v = np.asarray(v, dtype=float)
    R = np.asarray(R, dtype=float)
    bits = np.asarray(bits, dtype=np.int64)
    if np.any(bits < 1):
        raise ValueError("at least one bit per message is required")
    delta = step_size(R, bits)
    ncells = np.ldexp(1.0, bits)
    idx = np.floor((np.clip(v, -R, R) + R) / delta)
    idx = np.clip(idx, 0.0, ncells - 1.0)
    return -R + (idx + 0.5) * delta


def quantize(v, cfg: QuantizerConfig):
    out = quantize_array(v, cfg.range, cfg.bits)
    return float(out) if out.ndim == 0 else out


def expected_sq_error(cfg: QuantizerConfig) -> float:
    """White-noise model ``step**2 / 12 = R**2 / 3 * 4**-bits``."""
    return cfg.step**2 / 12.0
