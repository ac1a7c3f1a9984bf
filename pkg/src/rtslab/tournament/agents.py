"""Agents: a planner plus an evaluation variant, built fresh for every match."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Optional

from ..adaptive import AdaptiveEvaluator, OptimizerConfig
from ..evaluation import LanchesterParams, SimpleParams, StaticEvaluator
from ..game.state import GameState
from ..planners import (
    PLANNER_NAMES,
    Decision,
    MoveGenConfig,
    PortfolioConfig,
    SearchBudget,
    idabcd_decide,
    idrtminimax_decide,
    portfolio_decide,
)

VARIANTS = ("L", "S", "SQ", "DL", "DS", "DSQ")


class AgentSpecError(ValueError):
    pass


@dataclass(frozen=True)
class AgentSpec:
    """``planner:variant``, e.g. ``idrtminimax:DL``."""

    planner: str
    variant: str

    def __post_init__(self):
        if self.planner not in PLANNER_NAMES:
            raise AgentSpecError(f"unknown planner {self.planner!r}; expected one of {PLANNER_NAMES}")
        if self.variant not in VARIANTS:
            raise AgentSpecError(f"unknown eval variant {self.variant!r}; expected one of {VARIANTS}")

    @classmethod
    def parse(cls, text) -> "AgentSpec":
        if isinstance(text, AgentSpec):
            return text
        planner, sep, variant = str(text).partition(":")
        if not sep:
            raise AgentSpecError(f"agent spec {text!r} must look like planner:variant")
        return cls(planner.strip().lower(), variant.strip().upper())

    @property
    def adaptive(self) -> bool:
        return self.variant.startswith("D")

    @property
    def base_kind(self) -> str:
        return self.variant[1:] if self.adaptive else self.variant

    def __str__(self):
        return f"{self.planner}:{self.variant}"


@dataclass(frozen=True)
class AgentSettings:
    """Everything besides planner and variant that shapes an agent's play."""

    budget: SearchBudget = SearchBudget(wall_ms=20.0)
    movegen: MoveGenConfig = MoveGenConfig()
    portfolio: PortfolioConfig = field(default_factory=PortfolioConfig)
    optimizer: OptimizerConfig = OptimizerConfig()
    lanchester: LanchesterParams = LanchesterParams()
    simple: SimpleParams = SimpleParams()


class _TimedScorer:
    """Counts calls and accumulates wall time spent in the evaluation function."""

    __slots__ = ("fn", "calls", "ns")

    def __init__(self):
        self.fn = None
        self.calls = 0
        self.ns = 0

    def __call__(self, state: GameState) -> float:
        t = time.perf_counter_ns()
        v = self.fn(state)
        self.ns += time.perf_counter_ns() - t
        self.calls += 1
        return v


class Agent:
    def __init__(self, spec, player: int, settings: AgentSettings = AgentSettings(),
                 seed: Optional[int] = None):
        self.spec = AgentSpec.parse(spec)
        self.player = player
        self.settings = settings
        self.rng = random.Random(seed)
        cls = AdaptiveEvaluator if self.spec.adaptive else StaticEvaluator
        kw = dict(kind=self.spec.base_kind, player=player,
                  lanchester=settings.lanchester, simple=settings.simple)
        if self.spec.adaptive:
            kw["optimizer"] = settings.optimizer
        self.evaluator = cls(**kw)
        self._scorer = _TimedScorer()
        self.decisions: list[float] = []

    def start(self, state: GameState) -> "Agent":
        self.evaluator.fit(state)
        return self

    @property
    def eval_calls(self) -> int:
        return self._scorer.calls

    @property
    def eval_ns(self) -> int:
        return self._scorer.ns

    def decide(self, state: GameState) -> Decision:
        s = self._scorer
        t = time.perf_counter_ns()
        self.evaluator.observe(state)
        s.fn = self.evaluator.scorer()
        s.ns += time.perf_counter_ns() - t
        st = self.settings
        planner = self.spec.planner
        if planner == "idabcd":
            d = idabcd_decide(state, self.player, st.budget, s, rng=self.rng, movegen=st.movegen)
        elif planner == "idrtminimax":
            d = idrtminimax_decide(state, self.player, st.budget, s, rng=self.rng, movegen=st.movegen)
        else:
            d = portfolio_decide(state, self.player, st.budget, st.portfolio, s)
        self.decisions.append(d.elapsed_ms)
        return d
