"""Mutable adaptation state and the observe-update-evaluate loop."""

from __future__ import annotations

import csv
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from ..evaluation.functions import (
    EvalResult,
    base_scores,
    combine,
    features_both,
    normalize_eval,
)
from ..evaluation.weights import (
    N_COMPONENTS,
    Component,
    EvalKind,
    LanchesterParams,
    WeightVector,
)
from ..game.state import GameState
from .optimizer import AdamWMomentState, OptimizerConfig, optimizer_step, score_delta


class NotInitializedError(RuntimeError):
    pass


@dataclass
class AdaptiveEvalState:
    """Weights, last observed component scores and per-component moments.

    Owned by a single agent; ``adapt_and_evaluate`` updates it in place.
    """

    kind: EvalKind
    config: OptimizerConfig
    weights: WeightVector
    last_scores: list
    moments: list
    player: int = 0
    exponent: float = 0.7
    history: Optional[deque] = None
    last_rates: list = field(default_factory=lambda: [(0.0, 0.0)] * N_COMPONENTS)
    initialized: bool = True

    def history_rows(self):
        return list(self.history or ())

    def write_history_csv(self, path) -> None:
        """One row per component update: cycle, component, weight, L_t, D_t."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["cycle", "component", "weight", "L_t", "D_t"])
            for cycle, comp, w, lr, dr in self.history_rows():
                writer.writerow([cycle, comp, f"{w:.6g}", f"{lr:.6g}", f"{dr:.6g}"])


def _player_features(state: GameState, kind: EvalKind, player: int) -> list:
    f0, f1, _, _ = features_both(state, kind)
    return f0 if player == 0 else f1


def init_adaptive(eval_kind, initial_weights: WeightVector, cfg: OptimizerConfig,
                  state0: Optional[GameState] = None, player: int = 0,
                  lanchester: Optional[LanchesterParams] = None,
                  history_size: int = 0) -> AdaptiveEvalState:
    kind = EvalKind(eval_kind)
    for name, w in initial_weights.to_dict().items():
        if not cfg.w_floor <= w <= cfg.w_ceil:
            raise ValueError(f"{name}={w} outside [{cfg.w_floor}, {cfg.w_ceil}]")
    if player not in (0, 1):
        raise ValueError(f"player must be 0 or 1, got {player!r}")
    last = [0.0] * N_COMPONENTS if state0 is None else _player_features(state0, kind, player)
    return AdaptiveEvalState(
        kind=kind, config=cfg, weights=initial_weights, last_scores=list(last),
        moments=[AdamWMomentState()] * N_COMPONENTS, player=player,
        exponent=(lanchester or LanchesterParams()).attrition_exponent,
        history=deque(maxlen=history_size) if history_size else None,
    )


def adapt_and_evaluate(st: AdaptiveEvalState, state: GameState) -> tuple[EvalResult, AdaptiveEvalState]:
    """Observe ``state``: update every component whose score moved, then evaluate.

    A component whose score is exactly unchanged is left alone (no moment
    update, no decay), so a quiet battlefield leaves the weights untouched.
    """
    if not isinstance(st, AdaptiveEvalState) or not st.initialized:
        raise NotInitializedError("adaptive state must come from init_adaptive")
    cfg = st.config
    f0, f1, na0, na1 = features_both(state, st.kind)
    current = f0 if st.player == 0 else f1
    weights = st.weights.as_list()
    last = st.last_scores
    for c in range(N_COMPONENTS):
        s1, s0 = current[c], last[c]
        if s1 == s0:
            continue
        rec = optimizer_step(st.moments[c], weights[c], score_delta(s1, s0, cfg.delta_guard), cfg)
        st.moments[c] = rec.moments
        weights[c] = rec.weight
        st.last_rates[c] = (rec.lr, rec.dr)
        if st.history is not None:
            st.history.append((state.cycle, Component(c).name, rec.weight, rec.lr, rec.dr))
    st.weights = WeightVector.from_sequence(weights)
    st.last_scores = list(current)

    s_0 = combine(st.kind, f0, na0, weights, st.exponent)
    s_1 = combine(st.kind, f1, na1, weights, st.exponent)
    result = normalize_eval(s_0, s_1) if st.player == 0 else normalize_eval(s_1, s_0)
    return result, st


def evaluate_with(st: AdaptiveEvalState, state: GameState) -> EvalResult:
    """Evaluate with the current weights, without adapting."""
    s0, s1 = base_scores(state, st.kind, st.weights.as_list(), st.exponent)
    return normalize_eval(s0, s1) if st.player == 0 else normalize_eval(s1, s0)
