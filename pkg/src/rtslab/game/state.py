"""Game-state value types: units, maps, actions and results."""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .units import UnitKind, UnitTypeSpec

Pos = tuple[int, int]

NEUTRAL = -1
DEFAULT_MAX_CYCLES = 10_000

# N, E, S, W; this order is the tie-break order everywhere.
DIRECTIONS: tuple[Pos, ...] = ((0, -1), (1, 0), (0, 1), (-1, 0))
DIRECTION_NAMES = ("N", "E", "S", "W")


class Verb(enum.IntEnum):
    IDLE = 0
    MOVE = 1
    ATTACK = 2
    HARVEST = 3
    RETURN = 4
    PRODUCE = 5


class UnitAction(NamedTuple):
    """One unit's order.

    ``target`` is the destination cell for MOVE and PRODUCE, the pile cell for
    HARVEST, and the target unit id for ATTACK and RETURN (the base).
    """

    unit_id: int
    verb: Verb
    target: object = None
    kind: Optional[UnitKind] = None
    duration: int = 1

    def __str__(self):
        extra = "" if self.target is None else f" {self.target}"
        if self.kind is not None:
            extra += f" {self.kind.name}"
        return f"#{self.unit_id}:{self.verb.name}{extra}/{self.duration}"


def idle(unit_id: int, duration: int = 1) -> UnitAction:
    return UnitAction(unit_id, Verb.IDLE, None, None, duration)


class Winner(enum.IntEnum):
    P0 = 0
    P1 = 1
    DRAW = 2


class EndReason(enum.Enum):
    ELIMINATION = "ELIMINATION"
    CYCLE_CAP = "CYCLE_CAP"


@dataclass(frozen=True)
class GameResult:
    winner: Winner
    end_cycle: int
    reason: EndReason


@dataclass(frozen=True)
class MapSpec:
    width: int
    height: int
    resource_piles: tuple[tuple[Pos, int], ...] = ()
    initial_units: tuple[tuple[int, UnitKind, Pos], ...] = ()
    name: str = ""
    starting_resources: tuple[int, int] = (5, 5)


class Unit:
    __slots__ = ("id", "owner", "spec", "x", "y", "hp", "carried", "busy_until", "action")

    def __init__(self, id, owner, spec, x, y, hp=None, carried=0, busy_until=0, action=None):
        self.id = id
        self.owner = owner
        self.spec: UnitTypeSpec = spec
        self.x = x
        self.y = y
        self.hp = spec.max_hp if hp is None else hp
        self.carried = carried
        self.busy_until = busy_until
        self.action: Optional[UnitAction] = action

    @property
    def kind(self) -> UnitKind:
        return self.spec.kind

    @property
    def pos(self) -> Pos:
        return (self.x, self.y)

    @property
    def is_idle(self) -> bool:
        return self.action is None

    def copy(self) -> "Unit":
        u = Unit.__new__(Unit)
        u.id = self.id
        u.owner = self.owner
        u.spec = self.spec
        u.x = self.x
        u.y = self.y
        u.hp = self.hp
        u.carried = self.carried
        u.busy_until = self.busy_until
        u.action = self.action
        return u

    def key(self):
        return (self.id, self.owner, int(self.kind), self.x, self.y, self.hp,
                self.carried, self.busy_until, self.action)

    def __repr__(self):
        return (f"Unit(#{self.id} p{self.owner} {self.kind.name} @({self.x},{self.y}) "
                f"hp={self.hp} carried={self.carried} action={self.action})")


@dataclass(eq=False)
class GameState:
    """Complete observable battlefield at one cycle.

    Treated as a value: rule functions return fresh states and never mutate
    their input. ``spent`` and ``lost`` account for resources leaving
    circulation (production costs, cargo of dead workers) so that the
    resource total can be audited exactly.
    """

    map: MapSpec
    stats: dict
    units: dict[int, Unit]
    piles: dict[Pos, int]
    player_resources: list[int]
    cycle: int = 0
    max_cycles: int = DEFAULT_MAX_CYCLES
    next_id: int = 0
    occupied: dict[Pos, int] = field(default_factory=dict)
    reserved: dict[Pos, int] = field(default_factory=dict)
    spent: list[int] = field(default_factory=lambda: [0, 0])
    lost: int = 0

    @property
    def width(self) -> int:
        return self.map.width

    @property
    def height(self) -> int:
        return self.map.height

    @property
    def free_resources(self) -> int:
        return sum(self.piles.values())

    def clone(self) -> "GameState":
        new = GameState.__new__(GameState)
        new.map = self.map
        new.stats = self.stats
        new.units = {uid: u.copy() for uid, u in self.units.items()}
        new.piles = dict(self.piles)
        new.player_resources = list(self.player_resources)
        new.cycle = self.cycle
        new.max_cycles = self.max_cycles
        new.next_id = self.next_id
        new.occupied = dict(self.occupied)
        new.reserved = dict(self.reserved)
        new.spent = list(self.spent)
        new.lost = self.lost
        return new

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.map.width and 0 <= y < self.map.height

    def is_free(self, pos: Pos) -> bool:
        return (0 <= pos[0] < self.map.width and 0 <= pos[1] < self.map.height
                and pos not in self.occupied and pos not in self.piles
                and pos not in self.reserved)

    def units_of(self, player: int) -> list[Unit]:
        return [u for u in self.units.values() if u.owner == player]

    def carried_total(self, player: int) -> int:
        return sum(u.carried for u in self.units.values() if u.owner == player)

    def resource_total(self) -> int:
        """Everything ever harvestable: piles, banks, cargo, spending and losses."""
        return (self.free_resources + sum(self.player_resources)
                + sum(u.carried for u in self.units.values())
                + sum(self.spent) + self.lost)

    def add_unit(self, owner: int, kind: UnitKind, pos: Pos, **kw) -> Unit:
        if pos in self.occupied or pos in self.piles:
            raise ValueError(f"cell {pos} is not free")
        if not self.in_bounds(*pos):
            raise ValueError(f"cell {pos} is out of bounds")
        unit = Unit(self.next_id, owner, self.stats[kind], pos[0], pos[1], **kw)
        self.next_id += 1
        self.units[unit.id] = unit
        self.occupied[pos] = unit.id
        return unit

    def signature(self) -> tuple:
        return (self.cycle, self.next_id, tuple(self.player_resources),
                tuple(sorted(self.piles.items())),
                tuple(u.key() for u in sorted(self.units.values(), key=lambda u: u.id)),
                tuple(sorted(self.reserved.items())), tuple(self.spent), self.lost)

    def digest(self) -> str:
        return hashlib.sha256(repr(self.signature()).encode()).hexdigest()

    def __repr__(self):
        return (f"GameState(cycle={self.cycle}, units={len(self.units)}, "
                f"resources={self.player_resources}, free={self.free_resources})")


def new_game(map_spec: MapSpec, stats=None, max_cycles: int = DEFAULT_MAX_CYCLES) -> GameState:
    """Initial state for a map."""
    from .units import default_unit_stats

    stats = default_unit_stats() if stats is None else stats
    state = GameState(map=map_spec, stats=stats, units={},
                      piles={pos: amount for pos, amount in map_spec.resource_piles},
                      player_resources=list(map_spec.starting_resources), max_cycles=max_cycles)
    for owner, kind, pos in map_spec.initial_units:
        state.add_unit(owner, kind, pos)
    return state
