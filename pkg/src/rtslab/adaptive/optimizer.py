"""Moment tracking and adaptive step sizes for online weight updates.

Each tracked score component owns one :class:`AdamWMomentState`. The signed
relative score change drives the learning-rate moments; its magnitude drives
the decay-rate moments, so decay grows with volatility and is never negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class OptimizerConfig:
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    eta0: float = 1e-4
    d0: float = 1e-4
    d_max: float = 0.01
    w_floor: float = 1e-3
    w_ceil: float = 1e3
    delta_guard: float = 1.0

    def __post_init__(self):
        if not 0 <= self.beta1 < 1:
            raise ValueError("beta1 must lie in [0, 1)")
        if not 0 <= self.beta2 < 1:
            raise ValueError("beta2 must lie in [0, 1)")
        if self.eps <= 0:
            raise ValueError("eps must be > 0")
        if not 0 <= self.d_max < 1:
            raise ValueError("d_max must lie in [0, 1)")
        if not 0 < self.w_floor < self.w_ceil:
            raise ValueError("need 0 < w_floor < w_ceil")
        if self.delta_guard <= 0:
            raise ValueError("delta_guard must be > 0")
        if self.eta0 < 0 or self.d0 < 0:
            raise ValueError("eta0 and d0 must be >= 0")

    @classmethod
    def from_dict(cls, doc: dict) -> "OptimizerConfig":
        return cls(**doc)


@dataclass(frozen=True)
class AdamWMomentState:
    m_lr: float = 0.0
    v_lr: float = 0.0
    m_dr: float = 0.0
    v_dr: float = 0.0
    step: int = 0


@dataclass(frozen=True)
class CorrectedMoments:
    m_lr: float
    v_lr: float
    m_dr: float
    v_dr: float


def score_delta(current: float, previous: float, delta_guard: float = 1.0) -> float:
    """Relative change, with the denominator kept away from zero."""
    return (current - previous) / max(abs(previous), delta_guard)


def update_moments(ms: AdamWMomentState, g: float, cfg: OptimizerConfig) -> AdamWMomentState:
    if not math.isfinite(g):
        raise ValueError(f"score change must be finite, got {g!r}")
    b1, b2 = cfg.beta1, cfg.beta2
    a = abs(g)
    return AdamWMomentState(
        m_lr=b1 * ms.m_lr + (1 - b1) * g,
        v_lr=b2 * ms.v_lr + (1 - b2) * g * g,
        m_dr=b1 * ms.m_dr + (1 - b1) * a,
        v_dr=b2 * ms.v_dr + (1 - b2) * a * a,
        step=ms.step + 1,
    )


def bias_correct(ms: AdamWMomentState, cfg: OptimizerConfig) -> CorrectedMoments:
    if ms.step < 1:
        raise ValueError("bias correction needs at least one update (step >= 1)")
    c1 = 1 - cfg.beta1 ** ms.step
    c2 = 1 - cfg.beta2 ** ms.step
    return CorrectedMoments(ms.m_lr / c1, ms.v_lr / c2, ms.m_dr / c1, ms.v_dr / c2)


def adaptive_rates(hat: CorrectedMoments, cfg: OptimizerConfig) -> tuple[float, float]:
    """Learning rate and (clamped) decay rate for this step."""
    if hat.v_lr < 0 or hat.v_dr < 0:
        raise ValueError("second moments must be non-negative")
    lr = cfg.eta0 * hat.m_lr / math.sqrt(hat.v_lr + cfg.eps)
    dr = cfg.d0 * hat.m_dr / math.sqrt(hat.v_dr + cfg.eps)
    return lr, min(max(dr, 0.0), cfg.d_max)


def _step_weight(w0: float, lr: float, dr: float, g: float, cfg: OptimizerConfig) -> float:
    w1 = (w0 + lr * g) * (1 - dr)
    return min(max(w1, cfg.w_floor), cfg.w_ceil)


def update_weight(w0: float, lr: float, dr: float, s1: float, s0: float,
                  cfg: OptimizerConfig) -> float:
    """Step the weight by the relative score change, apply decay, then clamp."""
    return _step_weight(w0, lr, dr, score_delta(s1, s0, cfg.delta_guard), cfg)


@dataclass(frozen=True)
class StepRecord:
    moments: AdamWMomentState
    corrected: CorrectedMoments
    lr: float
    dr: float
    weight: float


def optimizer_step(ms: AdamWMomentState, w0: float, g: float, cfg: OptimizerConfig) -> StepRecord:
    """One full update of a single component driven by its relative score change ``g``."""
    ms = update_moments(ms, g, cfg)
    hat = bias_correct(ms, cfg)
    lr, dr = adaptive_rates(hat, cfg)
    return StepRecord(ms, hat, lr, dr, _step_weight(w0, lr, dr, g, cfg))
