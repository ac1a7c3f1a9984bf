"""Input checks shared by the estimators and planners."""

from __future__ import annotations

from ..game.state import GameState


def check_player(player) -> int:
    if isinstance(player, bool) or player not in (0, 1):
        raise ValueError(f"player must be 0 or 1, got {player!r}")
    return int(player)


def check_game_state(state, *, deep: bool = False) -> GameState:
    """Reject non-states; with ``deep=True`` also audit the state invariants."""
    if not isinstance(state, GameState):
        raise TypeError(f"expected GameState, got {type(state).__name__}")
    if not deep:
        return state
    seen = {}
    for u in state.units.values():
        if not state.in_bounds(u.x, u.y):
            raise ValueError(f"unit {u.id} out of bounds at {u.pos}")
        if u.pos in seen:
            raise ValueError(f"units {seen[u.pos]} and {u.id} share cell {u.pos}")
        seen[u.pos] = u.id
        if not 0 <= u.hp <= u.spec.max_hp:
            raise ValueError(f"unit {u.id} hp {u.hp} outside [0, {u.spec.max_hp}]")
        if u.carried and not u.spec.harvest_amount:
            raise ValueError(f"unit {u.id} carries resources but cannot harvest")
        if state.occupied.get(u.pos) != u.id:
            raise ValueError(f"occupancy index out of sync for unit {u.id}")
    if len(state.occupied) != len(state.units):
        raise ValueError("occupancy index has stale cells")
    if min(state.player_resources) < 0:
        raise ValueError("negative player resources")
    return state


def check_states(states) -> list[GameState]:
    if isinstance(states, GameState):
        states = [states]
    states = list(states)
    for s in states:
        check_game_state(s)
    return states
