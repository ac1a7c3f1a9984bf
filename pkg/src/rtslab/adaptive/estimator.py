"""Adaptive evaluator: a static evaluator whose weights follow the game."""

from __future__ import annotations

from typing import Optional

from sklearn.utils.validation import check_is_fitted

from ..evaluation.estimator import StaticEvaluator
from ..evaluation.functions import EvalResult
from ..evaluation.weights import EvalKind
from ..utils.validation import check_game_state
from .optimizer import OptimizerConfig
from .state import AdaptiveEvalState, adapt_and_evaluate, evaluate_with, init_adaptive


class AdaptiveEvaluator(StaticEvaluator):
    """Evaluator that adapts its weights online from observed score changes.

    ``fit(state0)`` records the starting component scores; each
    ``partial_fit(state)`` (alias ``observe``) runs one adaptation step.
    Between observations the weights are frozen, so every node of a search
    is scored consistently.
    """

    adaptive = True

    def __init__(self, kind="L", player=0, weights=None, lanchester=None, simple=None,
                 optimizer: Optional[OptimizerConfig] = None, history_size=0):
        super().__init__(kind=kind, player=player, weights=weights,
                         lanchester=lanchester, simple=simple)
        self.optimizer = optimizer
        self.history_size = history_size

    def fit(self, state=None, y=None):
        if state is not None:
            check_game_state(state)
        self._resolve()
        self.optimizer_ = self.optimizer or OptimizerConfig()
        self.state_: AdaptiveEvalState = init_adaptive(
            self.kind_, self.weights_, self.optimizer_, state, player=self.player_,
            lanchester=self.lanchester_, history_size=self.history_size)
        self.n_updates_ = 0
        return self

    def adapt_and_evaluate(self, state) -> EvalResult:
        check_is_fitted(self, "state_")
        result, self.state_ = adapt_and_evaluate(self.state_, state)
        self.weights_ = self.state_.weights
        self.n_updates_ += 1
        return result

    def partial_fit(self, state, y=None):
        self.adapt_and_evaluate(state)
        return self

    observe = partial_fit

    def evaluate(self, state) -> EvalResult:
        check_is_fitted(self, "state_")
        return evaluate_with(self.state_, state)

    @property
    def label(self) -> str:
        return "D" + EvalKind(self.kind).value
