"""Rules: legal actions, simultaneous state advance, termination, playouts.

Actions are durative. An order is registered when issued and takes effect
when the unit's ``busy_until`` cycle is reached; everything completing on the
same cycle resolves together, attacks first (damage is summed before anyone
is removed, so mutual kills happen), then harvest, return, move and produce.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Mapping, Optional, Union

from .state import (
    DIRECTIONS,
    NEUTRAL,
    EndReason,
    GameResult,
    GameState,
    Unit,
    UnitAction,
    Verb,
    Winner,
    idle,
)
from .units import UnitKind

JointActions = Union[Mapping[int, Iterable[UnitAction]], Iterable[UnitAction]]
Policy = Callable[[GameState, int], list]


class IllegalActionError(ValueError):
    def __init__(self, action: UnitAction, reason: str):
        self.action = action
        super().__init__(f"illegal action for unit {action.unit_id} ({action.verb.name}): {reason}")


def manhattan(a: Unit, b: Unit) -> int:
    return abs(a.x - b.x) + abs(a.y - b.y)


def unit_actions(state: GameState, unit: Unit, idle_duration: int = 1) -> list[UnitAction]:
    """Every legal order for one idle unit, IDLE first."""
    spec = unit.spec
    uid = unit.id
    out = [idle(uid, idle_duration)]
    x, y = unit.x, unit.y
    if spec.can_move:
        for dx, dy in DIRECTIONS:
            p = (x + dx, y + dy)
            if state.is_free(p):
                out.append(UnitAction(uid, Verb.MOVE, p, None, spec.move_period))
    if spec.attack_damage > 0:
        rng = spec.attack_range
        for other in state.units.values():
            if (other.owner != unit.owner and other.owner != NEUTRAL
                    and abs(other.x - x) + abs(other.y - y) <= rng):
                out.append(UnitAction(uid, Verb.ATTACK, other.id, None, spec.attack_period))
    if spec.harvest_amount > 0:
        for dx, dy in DIRECTIONS:
            p = (x + dx, y + dy)
            if unit.carried == 0:
                if p in state.piles:
                    out.append(UnitAction(uid, Verb.HARVEST, p, None, spec.harvest_period))
            else:
                bid = state.occupied.get(p)
                if bid is not None:
                    base = state.units[bid]
                    if base.owner == unit.owner and base.spec.kind == UnitKind.MAINBASE:
                        out.append(UnitAction(uid, Verb.RETURN, bid, None, spec.return_period))
    if spec.produces:
        bank = state.player_resources[unit.owner]
        for kind in sorted(spec.produces):
            kspec = state.stats.get(kind)
            if kspec is None or bank < kspec.cost:
                continue
            for dx, dy in DIRECTIONS:
                p = (x + dx, y + dy)
                if state.is_free(p):
                    out.append(UnitAction(uid, Verb.PRODUCE, p, kind, kspec.produce_period))
    return out


def legal_actions(state: GameState, player: int, idle_duration: int = 1) -> dict[int, list[UnitAction]]:
    """Legal orders per idle unit of ``player`` (empty when nothing is idle)."""
    if player not in (0, 1):
        raise ValueError(f"player must be 0 or 1, got {player!r}")
    return {u.id: unit_actions(state, u, idle_duration)
            for u in sorted(state.units.values(), key=lambda u: u.id)
            if u.owner == player and u.action is None}


def has_options(state: GameState, unit: Unit) -> bool:
    """Whether an idle unit has any order besides IDLE."""
    spec = unit.spec
    x, y = unit.x, unit.y
    if spec.can_move:
        for dx, dy in DIRECTIONS:
            if state.is_free((x + dx, y + dy)):
                return True
    if spec.produces:
        bank = state.player_resources[unit.owner]
        cheapest = min((state.stats[k].cost for k in spec.produces if k in state.stats), default=None)
        if cheapest is not None and bank >= cheapest:
            for dx, dy in DIRECTIONS:
                if state.is_free((x + dx, y + dy)):
                    return True
    if spec.attack_damage > 0:
        rng = spec.attack_range
        for other in state.units.values():
            if (other.owner != unit.owner and other.owner != NEUTRAL
                    and abs(other.x - x) + abs(other.y - y) <= rng):
                return True
    if spec.harvest_amount > 0:
        return len(unit_actions(state, unit)) > 1
    return False


def needs_decision(state: GameState, player: int) -> bool:
    """A player is at a decision point when one of its idle units has a real choice."""
    for u in state.units.values():
        if u.owner == player and u.action is None and has_options(state, u):
            return True
    return False


def _is_legal(state: GameState, unit: Unit, action: UnitAction) -> Optional[str]:
    if action.verb == Verb.IDLE:
        return None if action.duration >= 1 else "IDLE duration must be >= 1"
    if action not in unit_actions(state, unit):
        return "not among the unit's legal actions"
    return None


def _flatten(joint: JointActions) -> list[tuple[Optional[int], UnitAction]]:
    if isinstance(joint, Mapping):
        return [(player, a) for player, acts in joint.items() for a in acts]
    return [(None, a) for a in joint]


def _issue(state: GameState, new: GameState, joint: JointActions, validate: bool) -> None:
    issued: dict[int, UnitAction] = {}
    for player, action in _flatten(joint):
        unit = new.units.get(action.unit_id)
        if unit is None:
            raise IllegalActionError(action, "no such unit")
        if player is not None and unit.owner != player:
            raise IllegalActionError(action, f"unit belongs to player {unit.owner}, not {player}")
        if unit.action is not None:
            raise IllegalActionError(action, "unit is busy")
        if action.unit_id in issued:
            raise IllegalActionError(action, "unit given two orders")
        if validate:
            reason = _is_legal(state, state.units[action.unit_id], action)
            if reason:
                raise IllegalActionError(action, reason)
        issued[action.unit_id] = action

    cancelled = set()
    by_cell = defaultdict(list)
    for a in issued.values():
        if a.verb == Verb.MOVE or a.verb == Verb.PRODUCE:
            by_cell[a.target].append(a.unit_id)
    for ids in by_cell.values():
        if len(ids) > 1:
            owners = {new.units[i].owner for i in ids}
            if len(owners) > 1:
                # cross-player clash: nobody gets the cell (keeps mirrored play mirrored)
                cancelled.update(ids)
            else:
                cancelled.update(sorted(ids)[1:])

    start = state.cycle
    for uid in sorted(issued):
        a = issued[uid]
        if uid in cancelled:
            continue
        if a.verb == Verb.IDLE and a.duration <= 1:
            continue
        unit = new.units[uid]
        if a.verb == Verb.PRODUCE:
            cost = new.stats[a.kind].cost
            owner = unit.owner
            if new.player_resources[owner] < cost:
                continue
            new.player_resources[owner] -= cost
            new.spent[owner] += cost
        if a.verb == Verb.MOVE or a.verb == Verb.PRODUCE:
            new.reserved[a.target] = uid
        unit.action = a
        unit.busy_until = start + a.duration


def _resolve(new: GameState) -> None:
    t = new.cycle
    units = new.units
    done = [u for u in units.values() if u.action is not None and u.busy_until <= t]
    if not done:
        return
    done.sort(key=lambda u: u.id)

    damage: dict[int, int] = defaultdict(int)
    for u in done:
        a = u.action
        if a.verb == Verb.ATTACK:
            target = units.get(a.target)
            if target is not None and abs(target.x - u.x) + abs(target.y - u.y) <= u.spec.attack_range:
                damage[target.id] += u.spec.attack_damage
    dead = set()
    for tid in sorted(damage):
        target = units[tid]
        target.hp = max(0, target.hp - damage[tid])
        if target.hp == 0:
            dead.add(tid)

    demand = defaultdict(list)
    for u in done:
        if u.action.verb == Verb.HARVEST and u.id not in dead:
            demand[u.action.target].append(u)
    for pile, workers in demand.items():
        left = new.piles.get(pile, 0)
        want = sum(w.spec.harvest_amount for w in workers)
        if want > left and len({w.owner for w in workers}) > 1:
            continue
        for w in workers:
            got = min(w.spec.harvest_amount, left)
            w.carried += got
            left -= got
        if left > 0:
            new.piles[pile] = left
        else:
            new.piles.pop(pile, None)

    for u in done:
        a = u.action
        if u.id in dead:
            continue
        if a.verb == Verb.RETURN:
            base = units.get(a.target)
            if base is not None and base.id not in dead and manhattan(u, base) == 1:
                new.player_resources[u.owner] += u.carried
                u.carried = 0
        elif a.verb == Verb.MOVE:
            new.reserved.pop(a.target, None)
            del new.occupied[(u.x, u.y)]
            u.x, u.y = a.target
            new.occupied[a.target] = u.id

    for u in done:
        a = u.action
        if a.verb == Verb.PRODUCE:
            new.reserved.pop(a.target, None)
            if u.id not in dead:
                new.add_unit(u.owner, a.kind, a.target)
        u.action = None

    for tid in sorted(dead):
        u = units.pop(tid)
        new.lost += u.carried
        del new.occupied[(u.x, u.y)]
        a = u.action
        if a is not None and (a.verb == Verb.MOVE or a.verb == Verb.PRODUCE):
            new.reserved.pop(a.target, None)


def advance(state: GameState, joint_actions: JointActions = (), validate: bool = True) -> GameState:
    """Successor state after issuing ``joint_actions`` and running one cycle.

    ``joint_actions`` maps player index to that player's orders (or is a flat
    iterable of orders). The input state is never modified.
    """
    new = state.clone()
    _issue(state, new, joint_actions, validate)
    new.cycle += 1
    _resolve(new)
    return new


def winner(state: GameState) -> Optional[GameResult]:
    alive = [False, False]
    for u in state.units.values():
        if u.owner == 0 or u.owner == 1:
            alive[u.owner] = True
            if alive[0] and alive[1]:
                break
    if not alive[0] and not alive[1]:
        return GameResult(Winner.DRAW, state.cycle, EndReason.ELIMINATION)
    if not alive[1]:
        return GameResult(Winner.P0, state.cycle, EndReason.ELIMINATION)
    if not alive[0]:
        return GameResult(Winner.P1, state.cycle, EndReason.ELIMINATION)
    if state.cycle >= state.max_cycles:
        return GameResult(Winner.DRAW, state.cycle, EndReason.CYCLE_CAP)
    return None


def next_event_cycle(state: GameState) -> Optional[int]:
    busy = [u.busy_until for u in state.units.values() if u.action is not None]
    return min(busy) if busy else None


def skip_quiet_cycles(state: GameState, limit: int) -> GameState:
    """Advance with no new orders until something completes or ``limit`` is hit.

    Cycles in which no action completes change nothing except the counter,
    so they are jumped over in one step. Returns a new state.
    """
    limit = min(limit, state.max_cycles)
    nxt = next_event_cycle(state)
    target = limit if nxt is None else min(nxt, limit)
    if target <= state.cycle:
        return state
    new = state.clone()
    new.cycle = target
    _resolve(new)
    return new


def advance_to_decision(state: GameState, joint_actions: JointActions = (),
                        max_wait: Optional[int] = None, validate: bool = False) -> GameState:
    """Issue orders, then run until some player needs a decision or the game ends."""
    s = advance(state, joint_actions, validate=validate)
    limit = s.max_cycles if max_wait is None else min(s.max_cycles, state.cycle + max_wait)
    while (s.cycle < limit and winner(s) is None
           and not needs_decision(s, 0) and not needs_decision(s, 1)):
        s = skip_quiet_cycles(s, limit)
    return s


def run_script_playout(state: GameState, script0: Policy, script1: Policy, horizon: int,
                       on_step: Optional[Callable[[GameState], None]] = None) -> GameState:
    """Play both policies from ``state`` for ``horizon`` cycles or until the game ends."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    end = min(state.cycle + horizon, state.max_cycles)
    s = state
    scripts = (script0, script1)
    while s.cycle < end and winner(s) is None:
        joint = {}
        for p in (0, 1):
            if needs_decision(s, p):
                acts = scripts[p](s, p)
                if acts:
                    joint[p] = acts
        if joint:
            s = advance(s, joint, validate=False)
        else:
            s = skip_quiet_cycles(s, end) if s.cycle + 1 < end else advance(s)
        if on_step is not None:
            on_step(s)
    return s
