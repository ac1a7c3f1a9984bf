"""Online adaptation of evaluation weights from observed score changes."""

from ..evaluation.weights import WeightVector
from .estimator import AdaptiveEvaluator
from .optimizer import (
    AdamWMomentState,
    CorrectedMoments,
    OptimizerConfig,
    StepRecord,
    adaptive_rates,
    bias_correct,
    optimizer_step,
    score_delta,
    update_moments,
    update_weight,
)
from .state import (
    AdaptiveEvalState,
    NotInitializedError,
    adapt_and_evaluate,
    evaluate_with,
    init_adaptive,
)

__all__ = [
    "AdamWMomentState", "AdaptiveEvalState", "AdaptiveEvaluator", "CorrectedMoments",
    "NotInitializedError", "OptimizerConfig", "StepRecord", "WeightVector",
    "adapt_and_evaluate", "adaptive_rates", "bias_correct", "evaluate_with",
    "init_adaptive", "optimizer_step", "score_delta", "update_moments", "update_weight",
]
