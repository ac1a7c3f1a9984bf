"""Budgets, decisions and joint-action generation shared by the planners."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Optional

from ..game.rules import unit_actions
from ..game.state import GameState, Pos, UnitAction, Verb, idle
from ..game.units import UnitKind
from .clock import MonotonicClock, VirtualClock

Evaluator = Callable[[GameState], float]


@dataclass(frozen=True)
class SearchBudget:
    """Per-decision budget.

    With ``ms_per_node`` set, time is counted on a virtual clock (one tick per
    expanded node or simulated playout step) instead of the wall clock.
    """

    wall_ms: float = 100.0
    max_depth: int = 8
    playout_horizon: int = 100
    safety_margin_ms: float = 1.0
    ms_per_node: Optional[float] = None

    def __post_init__(self):
        if not self.wall_ms > self.safety_margin_ms >= 0:
            raise ValueError("need wall_ms > safety_margin_ms >= 0")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.playout_horizon < 1:
            raise ValueError("playout_horizon must be >= 1")
        if self.ms_per_node is not None and self.ms_per_node <= 0:
            raise ValueError("ms_per_node must be > 0")

    @property
    def deadline_ms(self) -> float:
        return self.wall_ms - self.safety_margin_ms

    def make_clock(self):
        if self.ms_per_node is None:
            return MonotonicClock()
        return VirtualClock(self.ms_per_node)


@dataclass(frozen=True)
class MoveGenConfig:
    """Branching controls for joint-action generation."""

    idle_wait: int = 10
    max_unit_choices: int = 5
    max_joint_actions: int = 24
    max_wait: int = 200

    def __post_init__(self):
        if self.idle_wait < 1 or self.max_wait < 1:
            raise ValueError("idle_wait and max_wait must be >= 1")
        if self.max_unit_choices < 1 or self.max_joint_actions < 1:
            raise ValueError("choice caps must be >= 1")


@dataclass
class Decision:
    player: int
    actions: tuple
    value: float
    completed_depth: int
    nodes_visited: int
    elapsed_ms: float
    timed_out: bool = False
    info: dict = field(default_factory=dict)


def _dist(a: Pos, b: Pos) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _goal(state: GameState, u) -> Optional[Pos]:
    if u.kind == UnitKind.WORKER:
        if u.carried:
            bases = [b.pos for b in state.units.values()
                     if b.owner == u.owner and b.kind == UnitKind.MAINBASE]
            if bases:
                return min(bases, key=lambda p: (_dist(u.pos, p), p))
        elif state.piles:
            return min(state.piles, key=lambda p: (_dist(u.pos, p), p))
    enemies = [e.pos for e in state.units.values() if e.owner == 1 - u.owner]
    if enemies:
        return min(enemies, key=lambda p: (_dist(u.pos, p), p))
    return None


_VERB_ORDER = {Verb.ATTACK: 0, Verb.PRODUCE: 1, Verb.RETURN: 2, Verb.HARVEST: 3, Verb.MOVE: 4}


def unit_choices(state: GameState, unit, cfg: MoveGenConfig = MoveGenConfig()) -> list[UnitAction]:
    """A unit's orders, most promising first, capped; IDLE is always kept last.

    Attacks go weakest target first, moves toward the unit's goal (enemy,
    pile or base), and production keeps one cell per unit kind.
    """
    goal = _goal(state, unit)
    units = state.units
    seen_kinds = set()
    ranked = []
    for a in unit_actions(state, unit, cfg.idle_wait):
        v = a.verb
        if v == Verb.IDLE:
            continue
        if v == Verb.ATTACK:
            t = units[a.target]
            key = (t.hp, t.id)
        elif v == Verb.MOVE or v == Verb.PRODUCE:
            key = (_dist(a.target, goal) if goal else 0,)
        else:
            key = ()
        ranked.append(((_VERB_ORDER[v], int(a.kind or 0)) + key, a))
    ranked.sort(key=lambda r: r[0])
    out = []
    for _, a in ranked:
        if a.verb == Verb.PRODUCE:
            if a.kind in seen_kinds:
                continue
            seen_kinds.add(a.kind)
        out.append(a)
    out = out[: cfg.max_unit_choices - 1]
    out.append(idle(unit.id, cfg.idle_wait))
    return out


def _clashes(joint) -> bool:
    cells = set()
    for a in joint:
        if a.verb == Verb.MOVE or a.verb == Verb.PRODUCE:
            if a.target in cells:
                return True
            cells.add(a.target)
    return False


def forced_idle(state: GameState, player: int, cfg: MoveGenConfig = MoveGenConfig()) -> tuple:
    """IDLE orders for every idle unit of ``player``, lowest id first."""
    return tuple(idle(u.id, cfg.idle_wait)
                 for u in sorted(state.units_of(player), key=lambda u: u.id) if u.is_idle)


def joint_actions(state: GameState, player: int, cfg: MoveGenConfig = MoveGenConfig()) -> list[tuple]:
    """Joint orders for ``player``'s idle units, at most ``cfg.max_joint_actions``.

    Units first take their best choice that does not collide with a lower-id
    unit's cell; candidates then deviate from that base one unit at a time
    (lowest id first), then two at a time, and so on, until the cap is hit.
    Joints that send two own units to one cell are skipped.
    """
    idle_units = sorted((u for u in state.units.values()
                         if u.owner == player and u.action is None), key=lambda u: u.id)
    if not idle_units:
        return [()]
    choices = []
    taken = set()
    for u in idle_units:
        c = unit_choices(state, u, cfg)
        for j, a in enumerate(c):
            if (a.verb != Verb.MOVE and a.verb != Verb.PRODUCE) or a.target not in taken:
                break
        if j:
            c.insert(0, c.pop(j))
        if c[0].verb == Verb.MOVE or c[0].verb == Verb.PRODUCE:
            taken.add(c[0].target)
        choices.append(c)
    movable = [i for i, c in enumerate(choices) if len(c) > 1]
    base = [c[0] for c in choices]
    out = [tuple(base)]
    cap = cfg.max_joint_actions
    tries = 16 * cap
    for k in range(1, len(movable) + 1):
        for idxs in combinations(movable, k):
            for alts in product(*(range(1, len(choices[i])) for i in idxs)):
                if len(out) >= cap or tries <= 0:
                    return out
                tries -= 1
                joint = list(base)
                for i, a in zip(idxs, alts):
                    joint[i] = choices[i][a]
                if not _clashes(joint):
                    out.append(tuple(joint))
    return out
