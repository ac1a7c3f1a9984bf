"""Estimator-style wrapper around the static evaluation functions."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..utils.validation import check_game_state, check_player, check_states
from .functions import EvalResult, base_scores, make_scorer, normalize_eval
from .weights import EvalKind, LanchesterParams, SimpleParams, WeightVector, default_weights


def _as_weights(weights) -> WeightVector:
    if isinstance(weights, WeightVector):
        return weights
    if isinstance(weights, dict):
        return WeightVector(**{k: float(v) for k, v in weights.items()})
    return WeightVector.from_sequence(weights)


class StaticEvaluator(BaseEstimator):
    """Fixed-weight evaluator for one side of the board.

    ``fit`` resolves parameters and default weights; ``transform`` maps a
    batch of states to normalised values in (-1, 1) from ``player``'s side.

    >>> from rtslab.game import load_map, new_game
    >>> ev = StaticEvaluator(kind="L").fit()
    >>> float(ev.transform([new_game(load_map("m1"))])[0])
    0.0
    """

    adaptive = False

    def __init__(self, kind="L", player=0, weights=None, lanchester=None, simple=None):
        self.kind = kind
        self.player = player
        self.weights = weights
        self.lanchester = lanchester
        self.simple = simple

    def _resolve(self):
        self.kind_ = EvalKind(self.kind)
        self.player_ = check_player(self.player)
        self.lanchester_ = self.lanchester or LanchesterParams()
        self.simple_ = self.simple or SimpleParams()
        if self.weights is None:
            self.weights_ = default_weights(self.kind_, self.lanchester_, self.simple_)
        else:
            self.weights_ = _as_weights(self.weights)

    def fit(self, state=None, y=None):
        if state is not None:
            check_game_state(state)
        self._resolve()
        return self

    def observe(self, state):
        """Hook called once per root decision; static weights ignore it."""
        return self

    def evaluate(self, state) -> EvalResult:
        check_is_fitted(self, "weights_")
        s0, s1 = base_scores(state, self.kind_, self.weights_.as_list(),
                             self.lanchester_.attrition_exponent)
        return normalize_eval(s0, s1) if self.player_ == 0 else normalize_eval(s1, s0)

    def scorer(self):
        """Fast ``state -> value`` closure with the current weights frozen."""
        check_is_fitted(self, "weights_")
        return make_scorer(self.kind_, self.weights_, self.player_,
                           self.lanchester_.attrition_exponent)

    def transform(self, states) -> np.ndarray:
        check_is_fitted(self, "weights_")
        score = self.scorer()
        return np.array([score(s) for s in check_states(states)], dtype=float)

    def fit_transform(self, states, y=None) -> np.ndarray:
        states = check_states(states)
        return self.fit(states[0] if states else None).transform(states)

    @property
    def label(self) -> str:
        return EvalKind(self.kind).value
