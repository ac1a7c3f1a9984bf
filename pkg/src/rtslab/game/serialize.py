"""JSON-friendly encoding of game states (maps are stored once, alongside)."""

from __future__ import annotations

from typing import Optional

from .state import GameState, MapSpec, Unit, UnitAction, Verb
from .units import UnitKind, default_unit_stats


def _pos(p):
    return [p[0], p[1]]


def action_to_list(a: Optional[UnitAction]):
    if a is None:
        return None
    target = _pos(a.target) if isinstance(a.target, tuple) else a.target
    return [a.unit_id, a.verb.name, target, None if a.kind is None else a.kind.name, a.duration]


def action_from_list(row) -> Optional[UnitAction]:
    if row is None:
        return None
    uid, verb, target, kind, duration = row
    if isinstance(target, list):
        target = (target[0], target[1])
    return UnitAction(uid, Verb[verb], target, None if kind is None else UnitKind[kind], duration)


def state_to_dict(state: GameState) -> dict:
    return {
        "cycle": state.cycle,
        "max_cycles": state.max_cycles,
        "next_id": state.next_id,
        "player_resources": list(state.player_resources),
        "spent": list(state.spent),
        "lost": state.lost,
        "piles": [[p[0], p[1], a] for p, a in sorted(state.piles.items())],
        "reserved": [[p[0], p[1], uid] for p, uid in sorted(state.reserved.items())],
        "units": [[u.id, u.owner, u.kind.name, u.x, u.y, u.hp, u.carried, u.busy_until,
                   action_to_list(u.action)]
                  for u in sorted(state.units.values(), key=lambda u: u.id)],
    }


def state_from_dict(doc: dict, map_spec: MapSpec, stats=None) -> GameState:
    stats = default_unit_stats() if stats is None else stats
    units = {}
    occupied = {}
    for uid, owner, kind, x, y, hp, carried, busy, action in doc["units"]:
        units[uid] = Unit(uid, owner, stats[UnitKind[kind]], x, y, hp=hp, carried=carried,
                          busy_until=busy, action=action_from_list(action))
        occupied[(x, y)] = uid
    return GameState(
        map=map_spec, stats=stats, units=units,
        piles={(x, y): a for x, y, a in doc["piles"]},
        player_resources=list(doc["player_resources"]),
        cycle=doc["cycle"], max_cycles=doc["max_cycles"], next_id=doc["next_id"],
        occupied=occupied, reserved={(x, y): uid for x, y, uid in doc["reserved"]},
        spent=list(doc["spent"]), lost=doc["lost"],
    )
