"""Deterministic rush scripts used as portfolio atoms and playout policies.

Tie-breaks use each player's own frame of reference: player 1 sees the board
rotated by 180 degrees, so "north" for player 1 is south on the board. With
that convention a mirrored position played by the same script stays mirrored.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from ..game.state import DIRECTIONS, GameState, Pos, Unit, UnitAction, Verb, idle
from ..game.units import UnitKind


class ScriptName(str, enum.Enum):
    WORKER_RUSH = "WORKER_RUSH"
    LIGHT_RUSH = "LIGHT_RUSH"
    RANGED_RUSH = "RANGED_RUSH"
    HEAVY_RUSH = "HEAVY_RUSH"


_RUSH_UNIT = {
    ScriptName.LIGHT_RUSH: UnitKind.LIGHT,
    ScriptName.RANGED_RUSH: UnitKind.RANGE,
    ScriptName.HEAVY_RUSH: UnitKind.HEAVY,
}


@dataclass(frozen=True)
class Script:
    name: ScriptName
    wait: int = 5

    def __call__(self, state: GameState, player: int) -> list[UnitAction]:
        return list(script_action(state, player, self).values())

    def __str__(self):
        return self.name.value


def default_scripts() -> tuple[Script, ...]:
    return tuple(Script(n) for n in ScriptName)


def get_script(name) -> Script:
    return Script(ScriptName(str(name).upper()))


def _player_dirs(player: int) -> tuple[Pos, ...]:
    if player == 0:
        return DIRECTIONS
    return tuple((-dx, -dy) for dx, dy in DIRECTIONS)


def _rel(state: GameState, pos: Pos, player: int) -> Pos:
    if player == 0:
        return pos
    return (state.map.width - 1 - pos[0], state.map.height - 1 - pos[1])


def _dist(a: Pos, b: Pos) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


class _Planner:
    """Per-call bookkeeping so one script call never double-books cells or resources."""

    def __init__(self, state: GameState, player: int, script: Script):
        self.state = state
        self.player = player
        self.script = script
        self.dirs = _player_dirs(player)
        self.bank = state.player_resources[player]
        self.claimed: set[Pos] = set()
        self.mine = sorted((u for u in state.units.values() if u.owner == player), key=lambda u: u.id)
        self.enemies = sorted((u for u in state.units.values() if u.owner == 1 - player),
                              key=lambda u: u.id)

    def free(self, p: Pos) -> bool:
        return p not in self.claimed and self.state.is_free(p)

    def wait(self, u: Unit) -> UnitAction:
        return idle(u.id, self.script.wait)

    def step_toward(self, u: Unit, goal: Pos) -> Optional[UnitAction]:
        here = _dist(u.pos, goal)
        best = None
        for dx, dy in self.dirs:
            p = (u.x + dx, u.y + dy)
            if not self.free(p):
                continue
            d = _dist(p, goal)
            if d < here and (best is None or d < best[0]):
                best = (d, p)
        if best is None:
            return None
        self.claimed.add(best[1])
        return UnitAction(u.id, Verb.MOVE, best[1], None, u.spec.move_period)

    def produce(self, u: Unit, kind: UnitKind) -> Optional[UnitAction]:
        spec = self.state.stats.get(kind)
        if spec is None or kind not in u.spec.produces or self.bank < spec.cost:
            return None
        for dx, dy in self.dirs:
            p = (u.x + dx, u.y + dy)
            if self.free(p):
                self.claimed.add(p)
                self.bank -= spec.cost
                return UnitAction(u.id, Verb.PRODUCE, p, kind, spec.produce_period)
        return None

    def attack_move(self, u: Unit) -> UnitAction:
        if u.spec.attack_damage > 0 and self.enemies:
            rng = u.spec.attack_range
            in_range = [e for e in self.enemies if _dist(u.pos, e.pos) <= rng]
            if in_range:
                target = min(in_range, key=lambda e: (e.hp, e.id))
                return UnitAction(u.id, Verb.ATTACK, target.id, None, u.spec.attack_period)
        if u.spec.can_move and self.enemies:
            nearest = min(self.enemies, key=lambda e: (_dist(u.pos, e.pos), e.id))
            step = self.step_toward(u, nearest.pos)
            if step is not None:
                return step
        return self.wait(u)

    def harvest(self, u: Unit) -> UnitAction:
        state = self.state
        if u.carried > 0:
            bases = [b for b in self.mine if b.kind == UnitKind.MAINBASE]
            if not bases:
                return self.attack_move(u)
            base = min(bases, key=lambda b: (_dist(u.pos, b.pos), b.id))
            if _dist(u.pos, base.pos) == 1:
                return UnitAction(u.id, Verb.RETURN, base.id, None, u.spec.return_period)
            return self.step_toward(u, base.pos) or self.wait(u)
        if not state.piles:
            return self.attack_move(u)
        pile = min(state.piles, key=lambda p: (_dist(u.pos, p), _rel(state, p, self.player)))
        if _dist(u.pos, pile) == 1:
            return UnitAction(u.id, Verb.HARVEST, pile, None, u.spec.harvest_period)
        return self.step_toward(u, pile) or self.wait(u)


def script_action(state: GameState, player: int, script: Script) -> dict[int, UnitAction]:
    """The script's orders for every idle unit of ``player``, keyed by unit id."""
    plan = _Planner(state, player, script)
    mine = plan.mine
    workers = [u for u in mine if u.kind == UnitKind.WORKER]
    harvester = workers[0].id if workers and state.piles else None
    rush_unit = _RUSH_UNIT.get(script.name)
    worker_target = None if rush_unit is None else 2

    pending = [u.action for u in mine if u.action is not None and u.action.verb == Verb.PRODUCE]
    have_rax = (any(u.kind == UnitKind.RAX for u in mine)
                or any(a.kind == UnitKind.RAX for a in pending))
    n_workers = len(workers) + sum(1 for a in pending if a.kind == UnitKind.WORKER)

    out: dict[int, UnitAction] = {}
    for u in mine:
        if u.action is not None:
            continue
        kind = u.kind
        act = None
        if kind == UnitKind.MAINBASE:
            if worker_target is None or n_workers < worker_target:
                act = plan.produce(u, UnitKind.WORKER)
                if act is not None:
                    n_workers += 1
        elif kind == UnitKind.RAX:
            if rush_unit is not None:
                act = plan.produce(u, rush_unit)
        elif kind == UnitKind.WORKER:
            if rush_unit is not None and not have_rax and u.id == harvester:
                act = plan.produce(u, UnitKind.RAX)
                if act is not None:
                    have_rax = True
            if act is None:
                act = plan.harvest(u) if u.id == harvester else plan.attack_move(u)
        else:
            act = plan.attack_move(u)
        out[u.id] = act if act is not None else plan.wait(u)
    return out
