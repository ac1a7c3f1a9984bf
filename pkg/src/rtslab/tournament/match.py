"""One full game between two agents."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional

from ..game.rules import advance, needs_decision, skip_quiet_cycles, winner
from ..game.state import EndReason, GameResult, GameState, MapSpec, Winner, new_game
from .agents import Agent, AgentSettings, AgentSpec

FORFEIT_FACTOR = 10.0


@dataclass
class MatchRecord:
    map: str
    agent0: str
    agent1: str
    seed: int
    result: Optional[GameResult]
    cycles: int
    decisions: tuple = (0, 0)
    mean_ms: tuple = (0.0, 0.0)
    max_ms: tuple = (0.0, 0.0)
    eval_calls: tuple = (0, 0)
    eval_ns_total: tuple = (0, 0)
    digest: str = ""
    forfeit: Optional[int] = None
    error: Optional[str] = None
    virtual_clock: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def planner(self) -> str:
        p0, p1 = AgentSpec.parse(self.agent0).planner, AgentSpec.parse(self.agent1).planner
        return p0 if p0 == p1 else f"{p0}/{p1}"

    @property
    def winner(self) -> Optional[Winner]:
        return None if self.result is None else self.result.winner

    def points(self) -> tuple[float, float]:
        """Win 1, draw 0.5, loss 0 (errored matches score nothing)."""
        w = self.winner
        if w is None:
            return (0.0, 0.0)
        if w == Winner.P0:
            return (1.0, 0.0)
        if w == Winner.P1:
            return (0.0, 1.0)
        return (0.5, 0.5)

    def eval_ns_per_call(self, i: int) -> float:
        return self.eval_ns_total[i] / self.eval_calls[i] if self.eval_calls[i] else 0.0

    def to_dict(self) -> dict:
        r = self.result
        return {
            "map": self.map, "agent0": self.agent0, "agent1": self.agent1, "seed": self.seed,
            "winner": None if r is None else r.winner.name,
            "end_reason": None if r is None else r.reason.name,
            "cycles": self.cycles, "decisions": list(self.decisions),
            "mean_ms": list(self.mean_ms), "max_ms": list(self.max_ms),
            "eval_calls": list(self.eval_calls), "eval_ns_total": list(self.eval_ns_total),
            "digest": self.digest, "forfeit": self.forfeit, "error": self.error,
            "virtual_clock": self.virtual_clock,
        }


def _encode(cycle: int, player: int, actions) -> bytes:
    return (f"{cycle}|{player}|" + ";".join(str(a) for a in actions) + "\n").encode()


def _agent_seed(seed: int, player: int) -> int:
    h = hashlib.sha256(f"{seed}|agent|{player}".encode()).digest()
    return int.from_bytes(h[:8], "big")


def run_match(map_spec: MapSpec, agent0, agent1, wall_ms: Optional[float] = None,
              max_cycles: int = 10_000, seed: int = 0,
              settings: Optional[AgentSettings] = None,
              settings1: Optional[AgentSettings] = None, stats=None) -> MatchRecord:
    """Play one game; player 0 is ``agent0``.

    ``settings`` configures both agents (``settings1`` overrides player 1's).
    ``wall_ms`` replaces the per-decision budget when given. An agent whose
    decision takes more than ten times its budget forfeits the game.
    """
    from dataclasses import replace

    settings = settings or AgentSettings()
    if wall_ms is not None:
        settings = replace(settings, budget=replace(settings.budget, wall_ms=float(wall_ms)))
    per_player = (settings, settings1 or settings)
    specs = (AgentSpec.parse(agent0), AgentSpec.parse(agent1))
    state: GameState = new_game(map_spec, stats=stats, max_cycles=max_cycles)
    agents = [Agent(specs[p], p, per_player[p], _agent_seed(seed, p)).start(state) for p in (0, 1)]
    log = hashlib.sha256()
    forfeit = None
    result = None
    while forfeit is None:
        result = winner(state)
        if result is not None:
            break
        joint = {}
        for p in (0, 1):
            if not needs_decision(state, p):
                continue
            d = agents[p].decide(state)
            if d.elapsed_ms > FORFEIT_FACTOR * per_player[p].budget.wall_ms:
                forfeit = p
                break
            if d.actions:
                joint[p] = d.actions
                log.update(_encode(state.cycle, p, d.actions))
        if forfeit is not None:
            result = GameResult(Winner.P1 if forfeit == 0 else Winner.P0, state.cycle,
                                EndReason.ELIMINATION)
            break
        state = advance(state, joint) if joint else skip_quiet_cycles(state, state.max_cycles)
    log.update(f"end|{result.winner.name}|{result.end_cycle}".encode())

    def stat(fn):
        return tuple(fn(a) for a in agents)

    return MatchRecord(
        map=map_spec.name, agent0=str(specs[0]), agent1=str(specs[1]), seed=seed,
        result=result, cycles=state.cycle,
        decisions=stat(lambda a: len(a.decisions)),
        mean_ms=stat(lambda a: sum(a.decisions) / len(a.decisions) if a.decisions else 0.0),
        max_ms=stat(lambda a: max(a.decisions, default=0.0)),
        eval_calls=stat(lambda a: a.eval_calls), eval_ns_total=stat(lambda a: a.eval_ns),
        digest=log.hexdigest(), forfeit=forfeit,
        virtual_clock=per_player[0].budget.ms_per_node is not None,
    )
