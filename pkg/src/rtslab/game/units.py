"""Unit kinds and their statistics table."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

SCHEMA_VERSION = 1


class UnitKind(enum.IntEnum):
    MAINBASE = 0
    RAX = 1
    WORKER = 2
    LIGHT = 3
    RANGE = 4
    HEAVY = 5


BUILDINGS = (UnitKind.MAINBASE, UnitKind.RAX)
MOBILE = (UnitKind.WORKER, UnitKind.LIGHT, UnitKind.RANGE, UnitKind.HEAVY)


class StatsError(ValueError):
    pass


@dataclass(frozen=True)
class UnitTypeSpec:
    kind: UnitKind
    cost: int
    max_hp: int
    attack_damage: int = 0
    attack_range: int = 0
    move_period: int = 0
    attack_period: int = 0
    produce_period: int = 1
    harvest_amount: int = 0
    harvest_period: int = 0
    return_period: int = 0
    can_move: bool = False
    produces: frozenset = frozenset()

    def __post_init__(self):
        name = self.kind.name
        if self.cost < 1:
            raise StatsError(f"{name}: cost must be >= 1")
        if self.max_hp < 1:
            raise StatsError(f"{name}: max_hp must be >= 1")
        if self.can_move and self.move_period < 1:
            raise StatsError(f"{name}: mobile kinds need move_period >= 1")
        if self.produce_period < 1:
            raise StatsError(f"{name}: produce_period must be >= 1")
        if self.attack_damage > 0 and (self.attack_period < 1 or self.attack_range < 1):
            raise StatsError(f"{name}: attackers need attack_period and attack_range >= 1")
        if self.harvest_amount > 0 and (self.harvest_period < 1 or self.return_period < 1):
            raise StatsError(f"{name}: harvesters need harvest_period and return_period >= 1")
        if self.kind == UnitKind.MAINBASE and not self.produces <= {UnitKind.WORKER}:
            raise StatsError("MAINBASE may only produce WORKER")
        if self.kind == UnitKind.RAX and not self.produces <= {
            UnitKind.LIGHT, UnitKind.RANGE, UnitKind.HEAVY
        }:
            raise StatsError("RAX may only produce LIGHT, RANGE, HEAVY")

    @property
    def can_attack(self) -> bool:
        return self.attack_damage > 0

    @property
    def can_harvest(self) -> bool:
        return self.harvest_amount > 0


UnitStats = Mapping[UnitKind, UnitTypeSpec]


def parse_unit_stats(doc: dict) -> dict[UnitKind, UnitTypeSpec]:
    """Build a stats table from a decoded unit-stats document.

    Kinds missing from the document are simply absent from the table, which
    lets tests run with tiny synthetic tables.
    """
    if doc.get("schema") != SCHEMA_VERSION:
        raise StatsError(f"unsupported unit-stats schema: {doc.get('schema')!r}")
    table = {}
    for key, fields in doc.items():
        if key == "schema":
            continue
        try:
            kind = UnitKind[key]
        except KeyError:
            raise StatsError(f"unknown unit kind {key!r}") from None
        fields = dict(fields)
        try:
            fields["produces"] = frozenset(UnitKind[k] for k in fields.get("produces", ()))
        except KeyError as exc:
            raise StatsError(f"{key}: unknown produced kind {exc.args[0]!r}") from None
        try:
            table[kind] = UnitTypeSpec(kind=kind, **fields)
        except TypeError as exc:
            raise StatsError(f"{key}: {exc}") from None
    return table


def load_unit_stats(path: str | Path | None = None) -> dict[UnitKind, UnitTypeSpec]:
    """Load a unit-stats JSON file, or the bundled default table."""
    if path is None:
        text = resources.files("rtslab.data").joinpath("unit_stats.json").read_text()
    else:
        text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StatsError(f"unit stats: {exc}") from None
    return parse_unit_stats(doc)


_DEFAULT: dict[UnitKind, UnitTypeSpec] | None = None


def default_unit_stats() -> dict[UnitKind, UnitTypeSpec]:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_unit_stats()
    return _DEFAULT
