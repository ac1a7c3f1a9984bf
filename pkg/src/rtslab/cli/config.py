"""Run configuration: JSON schema validation and conversion to runtime objects."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import jsonschema

from ..adaptive import OptimizerConfig
from ..evaluation import LanchesterParams, SimpleParams
from ..planners import PLANNER_NAMES, MoveGenConfig, PortfolioConfig, ScriptName, SearchBudget
from ..tournament import VARIANTS, AgentSettings, TournamentConfig

SCHEMA_VERSION = 1

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_nonneg = {"type": "number", "minimum": 0}
_int1 = {"type": "integer", "minimum": 1}


def _obj(props: dict, required=()) -> dict:
    return {"type": "object", "properties": props, "additionalProperties": False,
            "required": list(required)}


_AGENT = {"type": "string", "pattern": f"^({'|'.join(PLANNER_NAMES)}):({'|'.join(VARIANTS)})$"}

SCHEMA = _obj({
    "schema": {"const": SCHEMA_VERSION},
    "engine": _obj({
        "stats": {"type": ["string", "null"]},
        "max_cycles": _int1,
    }),
    "eval": _obj({
        "lanchester": _obj({k: _nonneg for k in (
            "W_MAINBASE", "W_RAX", "W_WORKER", "W_LIGHT", "W_RANGE", "W_HEAVY",
            "W_carried", "W_mined")} | {"attrition_exponent": _pos}),
        "simple": _obj({"R": _nonneg, "R_W": _nonneg, "U_B": _nonneg}),
        "optimizer": _obj({
            "beta1": _nonneg, "beta2": _nonneg, "eps": _pos, "eta0": _nonneg, "d0": _nonneg,
            "d_max": _nonneg, "w_floor": _pos, "w_ceil": _pos, "delta_guard": _pos,
        }),
    }),
    "planner": _obj({
        "wall_ms": _pos,
        "max_depth": _int1,
        "playout_horizon": _int1,
        "safety_margin_ms": _nonneg,
        "ms_per_node": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "response_iterations": _int1,
        "scripts": {"type": "array", "minItems": 1, "uniqueItems": True,
                    "items": {"enum": [s.value for s in ScriptName]}},
        "idle_wait": _int1,
        "max_unit_choices": _int1,
        "max_joint_actions": _int1,
        "max_wait": _int1,
    }),
    "tournament": _obj({
        "maps": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        "agents": {"type": "array", "minItems": 2, "uniqueItems": True, "items": _AGENT},
        "games_per_pairing": {"type": "integer", "minimum": 2, "multipleOf": 2},
        "seed": {"type": "integer", "minimum": 0},
        "parallel_matches": _int1,
    }),
    "output": _obj({
        "dir": {"type": "string"},
        "matches_csv": {"type": "string"},
        "scores_csv": {"type": "string"},
        "timing_csv": {"type": "string"},
        "manifest": {"type": "string"},
    }),
}, required=["schema"])


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _where(err: jsonschema.ValidationError) -> str:
    parts = [str(p) for p in err.absolute_path]
    if err.validator == "additionalProperties":
        extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
        parts.append(extra[0] if extra else "?")
        return ".".join(parts)
    return ".".join(parts) or "<root>"


def validate_document(doc) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        msg = "unknown key" if e.validator == "additionalProperties" else e.message
        raise ConfigError(_where(e), msg)


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def config_hash(doc) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


@dataclass
class RunConfig:
    doc: dict
    stats_path: Optional[str] = None
    max_cycles: int = 10_000
    settings: AgentSettings = field(default_factory=AgentSettings)
    tournament: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    @property
    def hash(self) -> str:
        return config_hash(self.doc)

    def tournament_config(self) -> TournamentConfig:
        t = self.tournament
        if "agents" not in t:
            raise ConfigError("tournament.agents", "required for a tournament run")
        return TournamentConfig(
            maps=tuple(t.get("maps", ("m0", "m1"))), agents=tuple(t["agents"]),
            games_per_pairing=t.get("games_per_pairing", 10),
            wall_ms=self.settings.budget.wall_ms, max_cycles=self.max_cycles,
            seed=t.get("seed", 0), parallel_matches=t.get("parallel_matches", 1),
            settings=self.settings, stats_path=self.stats_path)


def _build(cls, section: dict, path: str):
    try:
        return cls(**section)
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, str(exc)) from exc


def parse_config(doc) -> RunConfig:
    validate_document(doc)
    engine = doc.get("engine", {})
    ev = doc.get("eval", {})
    pl = dict(doc.get("planner", {}))
    budget_keys = ("wall_ms", "max_depth", "playout_horizon", "safety_margin_ms", "ms_per_node")
    move_keys = ("idle_wait", "max_unit_choices", "max_joint_actions", "max_wait")
    budget = {k: pl[k] for k in budget_keys if k in pl}
    budget.setdefault("wall_ms", 20.0)
    budget = _build(SearchBudget, budget, "planner")
    movegen = _build(MoveGenConfig, {k: pl[k] for k in move_keys if k in pl}, "planner")
    port = {}
    if "scripts" in pl:
        port["scripts"] = tuple(pl["scripts"])
    if "response_iterations" in pl:
        port["response_iterations"] = pl["response_iterations"]
    settings = AgentSettings(
        budget=budget, movegen=movegen,
        portfolio=_build(PortfolioConfig, port, "planner"),
        optimizer=_build(OptimizerConfig, ev.get("optimizer", {}), "eval.optimizer"),
        lanchester=_build(LanchesterParams, ev.get("lanchester", {}), "eval.lanchester"),
        simple=_build(SimpleParams, ev.get("simple", {}), "eval.simple"),
    )
    return RunConfig(doc=doc, stats_path=engine.get("stats"),
                     max_cycles=engine.get("max_cycles", 10_000), settings=settings,
                     tournament=dict(doc.get("tournament", {})), output=dict(doc.get("output", {})))


def load_config(path) -> RunConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError("", f"cannot read config {p}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"{p}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    return parse_config(doc)


def desk_scale_document(seed: int = 0) -> dict:
    """Default desk-scale tournament: all six variants under IDRTMinimax."""
    return {
        "schema": SCHEMA_VERSION,
        "engine": {"max_cycles": 1000},
        "planner": {"wall_ms": 20, "ms_per_node": 0.1},
        "tournament": {
            "maps": ["m1"],
            "agents": [f"idrtminimax:{v}" for v in VARIANTS],
            "games_per_pairing": 10,
            "seed": seed,
            "parallel_matches": 1,
        },
    }
