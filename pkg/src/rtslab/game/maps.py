"""Map documents: parsing, validation and the bundled M0-M3 maps."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .state import MapSpec
from .units import SCHEMA_VERSION, UnitKind

BUNDLED_MAPS = ("m0", "m1", "m2", "m3")
MIN_SIDE, MAX_SIDE = 8, 64


class MapError(ValueError):
    """Invalid map document; the message names the offending entry."""


def _read_document(source) -> tuple[str, str]:
    if isinstance(source, Path):
        return source.read_text(), str(source)
    text = str(source)
    if text.lower() in BUNDLED_MAPS:
        name = text.lower()
        return resources.files("rtslab.data.maps").joinpath(f"{name}.json").read_text(), name
    if text.lstrip().startswith("{"):
        return text, "<text>"
    return Path(text).read_text(), text


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MapError(f"{where}: expected integer, got {value!r}")
    return value


def load_map(source) -> MapSpec:
    """Parse a JSON map from a path, raw JSON text, or a bundled name (``"m1"``)."""
    text, origin = _read_document(source)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MapError(f"{origin}: parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise MapError(f"{origin}: top level must be an object")
    if doc.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise MapError(f"{origin}: unsupported schema {doc.get('schema')!r}")

    try:
        width = _int(doc["width"], "width")
        height = _int(doc["height"], "height")
    except KeyError as exc:
        raise MapError(f"{origin}: missing field {exc.args[0]!r}") from None
    for side, value in (("width", width), ("height", height)):
        if not MIN_SIDE <= value <= MAX_SIDE:
            raise MapError(f"{origin}: {side}={value} outside [{MIN_SIDE}, {MAX_SIDE}]")

    seen: dict[tuple[int, int], str] = {}

    def place(x, y, where):
        x, y = _int(x, f"{where}.x"), _int(y, f"{where}.y")
        if not (0 <= x < width and 0 <= y < height):
            raise MapError(f"{origin}: {where} at ({x},{y}) is out of bounds")
        if (x, y) in seen:
            raise MapError(f"{origin}: {where} at ({x},{y}) overlaps {seen[(x, y)]}")
        seen[(x, y)] = where
        return (x, y)

    piles = []
    for i, entry in enumerate(doc.get("resources", [])):
        where = f"resources[{i}]"
        try:
            pos = place(entry["x"], entry["y"], where)
            amount = _int(entry["amount"], f"{where}.amount")
        except KeyError as exc:
            raise MapError(f"{origin}: {where} missing field {exc.args[0]!r}") from None
        if amount < 1:
            raise MapError(f"{origin}: {where} amount must be >= 1")
        piles.append((pos, amount))

    units = []
    for i, entry in enumerate(doc.get("units", [])):
        where = f"units[{i}]"
        try:
            owner = _int(entry["owner"], f"{where}.owner")
            kind_name = entry["kind"]
            pos = place(entry["x"], entry["y"], where)
        except KeyError as exc:
            raise MapError(f"{origin}: {where} missing field {exc.args[0]!r}") from None
        if owner not in (0, 1):
            raise MapError(f"{origin}: {where} owner must be 0 or 1")
        try:
            kind = UnitKind[kind_name]
        except KeyError:
            raise MapError(f"{origin}: {where} unknown kind {kind_name!r}") from None
        units.append((owner, kind, pos))

    start = doc.get("starting_resources", [5, 5])
    if (not isinstance(start, list) or len(start) != 2
            or any(isinstance(v, bool) or not isinstance(v, int) or v < 0 for v in start)):
        raise MapError(f"{origin}: starting_resources must be two non-negative integers")

    return MapSpec(width=width, height=height, resource_piles=tuple(piles),
                   initial_units=tuple(units), name=str(doc.get("name", "")),
                   starting_resources=(start[0], start[1]))


def map_to_document(spec: MapSpec) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "name": spec.name,
        "width": spec.width,
        "height": spec.height,
        "starting_resources": list(spec.starting_resources),
        "resources": [{"x": p[0], "y": p[1], "amount": a} for p, a in spec.resource_piles],
        "units": [{"owner": o, "kind": k.name, "x": p[0], "y": p[1]}
                  for o, k, p in spec.initial_units],
    }


def is_point_symmetric(spec: MapSpec) -> bool:
    """True if the map is invariant under the 180-degree rotation that swaps the players."""
    w, h = spec.width, spec.height

    def mirror(p):
        return (w - 1 - p[0], h - 1 - p[1])

    piles = {p: a for p, a in spec.resource_piles}
    units = {p: (o, k) for o, k, p in spec.initial_units}
    if any(piles.get(mirror(p)) != a for p, a in piles.items()):
        return False
    return all(units.get(mirror(p)) == (1 - o, k) for p, (o, k) in units.items())
