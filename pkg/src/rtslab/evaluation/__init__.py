"""Base evaluation functions (Lanchester, Simple, SimpleSqrt) and normalisation."""

from .estimator import StaticEvaluator
from .functions import (
    EvalResult,
    ScoreBreakdown,
    base_scores,
    evaluate,
    lanchester_score,
    make_scorer,
    normalize_eval,
    sigmoid,
    simple_score,
    simple_sqrt_score,
    simple_upper_bound,
)
from .weights import (
    Component,
    EvalKind,
    LanchesterParams,
    SimpleParams,
    WeightVector,
    default_weights,
)

__all__ = [
    "Component", "EvalKind", "EvalResult", "LanchesterParams", "ScoreBreakdown",
    "SimpleParams", "StaticEvaluator", "WeightVector", "base_scores", "default_weights",
    "evaluate", "lanchester_score", "make_scorer", "normalize_eval", "sigmoid",
    "simple_score", "simple_sqrt_score", "simple_upper_bound",
]
