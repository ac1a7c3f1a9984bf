"""Lanchester, Simple and SimpleSqrt base scores and their sigmoid normalisation."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Optional

from ..game.state import GameState
from ..game.units import UnitKind
from .weights import (
    N_COMPONENTS,
    Component,
    EvalKind,
    LanchesterParams,
    SimpleParams,
    WeightVector,
    default_weights,
)

# Largest double below 1: keeps normalised values strictly inside (-1, 1)
# once the sigmoid saturates in floating point.
_EVAL_LIMIT = 1.0 - sys.float_info.epsilon / 2

_MAINBASE, _RAX, _WORKER, _LIGHT, _RANGE, _HEAVY = (int(k) for k in UnitKind)
_R, _RW = int(Component.R), int(Component.RW)


@dataclass(frozen=True)
class ScoreBreakdown:
    unit_scores: dict  # UnitKind -> weighted contribution (attrition factor included)
    resource_score: float
    total: float
    n_a: int
    features: tuple  # raw per-component quantities, indexed by Component


@dataclass(frozen=True)
class EvalResult:
    s_base_max: float
    s_base_min: float
    s_eval: float


def sigmoid(x: float) -> float:
    if not math.isfinite(x):
        raise ValueError(f"sigmoid needs a finite input, got {x!r}")
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def _squash(d: float) -> float:
    if d < 0:
        return -_squash(-d)
    v = 2.0 * sigmoid(d) - 1.0
    return v if v < _EVAL_LIMIT else _EVAL_LIMIT


def normalize_eval(s_max: float, s_min: float) -> EvalResult:
    """Map two base scores to a signed advantage in (-1, 1)."""
    if not (math.isfinite(s_max) and math.isfinite(s_min)):
        raise ValueError(f"scores must be finite, got {s_max!r}, {s_min!r}")
    return EvalResult(s_max, s_min, _squash(s_max - s_min))


def features_both(state: GameState, kind: EvalKind) -> tuple[list, list, int, int]:
    """Raw component quantities and mobile-unit counts for both players, one pass."""
    f = ([0.0] * N_COMPONENTS, [0.0] * N_COMPONENTS)
    na = [0, 0]
    lanchester = kind == EvalKind.L
    simple = kind == EvalKind.S
    sqrt = math.sqrt
    for u in state.units.values():
        p = u.owner
        if p != 0 and p != 1:
            continue
        spec = u.spec
        k = int(spec.kind)
        if lanchester:
            v = u.hp / spec.max_hp if (k == _LIGHT or k == _HEAVY) else float(u.hp)
            if k >= _WORKER:
                na[p] += 1
        elif simple:
            v = spec.cost * u.hp / spec.max_hp
        else:
            v = spec.cost * sqrt(u.hp / spec.max_hp)
        fp = f[p]
        fp[k] += v
        if u.carried:
            fp[_RW] += u.carried
    f[0][_R] = float(state.player_resources[0])
    f[1][_R] = float(state.player_resources[1])
    return f[0], f[1], na[0], na[1]


def combine(kind: EvalKind, feats, n_a: int, w, exponent: float = 0.7) -> float:
    """Recombine raw component quantities with weights ``w`` (indexed by Component)."""
    if kind == EvalKind.L:
        buildings = feats[0] * w[0] + feats[1] * w[1]
        mobile = feats[2] * w[2] + feats[3] * w[3] + feats[4] * w[4] + feats[5] * w[5]
        return buildings + (n_a ** exponent) * mobile + feats[_RW] * w[_RW] + feats[_R] * w[_R]
    return (feats[0] * w[0] + feats[1] * w[1] + feats[2] * w[2] + feats[3] * w[3]
            + feats[4] * w[4] + feats[5] * w[5] + feats[_R] * w[_R] + feats[_RW] * w[_RW])


def _breakdown(state, player, kind, weights: WeightVector, exponent) -> ScoreBreakdown:
    f0, f1, na0, na1 = features_both(state, kind)
    feats, n_a = (f0, na0) if player == 0 else (f1, na1)
    w = weights.as_list()
    factor = (n_a ** exponent) if kind == EvalKind.L else 1.0
    unit_scores = {}
    for k in UnitKind:
        i = int(k)
        scale = factor if (kind == EvalKind.L and i >= _WORKER) else 1.0
        unit_scores[k] = feats[i] * w[i] * scale
    resource = feats[_R] * w[_R] + feats[_RW] * w[_RW]
    return ScoreBreakdown(unit_scores=unit_scores, resource_score=resource,
                          total=combine(kind, feats, n_a, w, exponent),
                          n_a=n_a if kind == EvalKind.L else 0, features=tuple(feats))


def lanchester_score(state: GameState, player: int, params: Optional[LanchesterParams] = None,
                     weights: Optional[WeightVector] = None) -> ScoreBreakdown:
    params = params or LanchesterParams()
    weights = weights or params.default_weights()
    return _breakdown(state, player, EvalKind.L, weights, params.attrition_exponent)


def simple_score(state: GameState, player: int, params: Optional[SimpleParams] = None,
                 weights: Optional[WeightVector] = None) -> ScoreBreakdown:
    params = params or SimpleParams()
    weights = weights or params.default_weights()
    return _breakdown(state, player, EvalKind.S, weights, 1.0)


def simple_sqrt_score(state: GameState, player: int, params: Optional[SimpleParams] = None,
                      weights: Optional[WeightVector] = None) -> ScoreBreakdown:
    params = params or SimpleParams()
    weights = weights or params.default_weights()
    return _breakdown(state, player, EvalKind.SQ, weights, 1.0)


def simple_upper_bound(state: GameState, params: Optional[SimpleParams] = None) -> float:
    """Best score reachable from here: free resources plus the richer player's holdings."""
    params = params or SimpleParams()
    owned = [float(state.player_resources[0]), float(state.player_resources[1])]
    for u in state.units.values():
        if u.owner == 0 or u.owner == 1:
            owned[u.owner] += u.carried + u.spec.cost
    return (state.free_resources + max(owned)) * params.U_B


def base_scores(state: GameState, kind: EvalKind, w, exponent: float = 0.7) -> tuple[float, float]:
    f0, f1, na0, na1 = features_both(state, kind)
    return combine(kind, f0, na0, w, exponent), combine(kind, f1, na1, w, exponent)


def evaluate(state: GameState, eval_kind, weights: Optional[WeightVector] = None,
             max_player: int = 0, lanchester: Optional[LanchesterParams] = None,
             simple: Optional[SimpleParams] = None) -> EvalResult:
    """Normalised evaluation of ``state`` from ``max_player``'s side."""
    kind = EvalKind(eval_kind)
    if weights is None:
        weights = default_weights(kind, lanchester, simple)
    exponent = (lanchester or LanchesterParams()).attrition_exponent
    s0, s1 = base_scores(state, kind, weights.as_list(), exponent)
    if max_player == 0:
        return normalize_eval(s0, s1)
    return normalize_eval(s1, s0)


def make_scorer(eval_kind, weights: WeightVector, max_player: int, exponent: float = 0.7):
    """A fast ``state -> S_eval`` closure with the weights frozen."""
    kind = EvalKind(eval_kind)
    w = tuple(weights.as_list())
    squash = _squash

    def score(state: GameState) -> float:
        f0, f1, na0, na1 = features_both(state, kind)
        s0 = combine(kind, f0, na0, w, exponent)
        s1 = combine(kind, f1, na1, w, exponent)
        return squash(s0 - s1) if max_player == 0 else squash(s1 - s0)

    return score
