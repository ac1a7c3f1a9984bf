"""Deterministic, fully observable micro-RTS game model."""

from .maps import BUNDLED_MAPS, MapError, is_point_symmetric, load_map, map_to_document
from .rules import (
    IllegalActionError,
    advance,
    advance_to_decision,
    has_options,
    legal_actions,
    needs_decision,
    run_script_playout,
    skip_quiet_cycles,
    unit_actions,
    winner,
)
from .serialize import action_from_list, action_to_list, state_from_dict, state_to_dict
from .state import (
    DIRECTIONS,
    EndReason,
    GameResult,
    GameState,
    MapSpec,
    Unit,
    UnitAction,
    Verb,
    Winner,
    idle,
    new_game,
)
from .units import (
    BUILDINGS,
    MOBILE,
    StatsError,
    UnitKind,
    UnitTypeSpec,
    default_unit_stats,
    load_unit_stats,
    parse_unit_stats,
)

__all__ = [
    "BUILDINGS", "BUNDLED_MAPS", "DIRECTIONS", "MOBILE", "EndReason", "GameResult",
    "GameState", "IllegalActionError", "MapError", "MapSpec", "StatsError", "Unit",
    "UnitAction", "UnitKind", "UnitTypeSpec", "Verb", "Winner", "advance",
    "advance_to_decision", "default_unit_stats", "has_options", "idle",
    "is_point_symmetric", "legal_actions", "load_map", "load_unit_stats",
    "map_to_document", "needs_decision", "new_game", "parse_unit_stats",
    "run_script_playout", "skip_quiet_cycles", "unit_actions", "winner",
    "action_from_list", "action_to_list", "state_from_dict", "state_to_dict",
]
