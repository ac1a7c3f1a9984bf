"""Weight vectors and parameter sets for the base evaluation functions."""

from __future__ import annotations

import enum
from dataclasses import dataclass, fields

from ..game.units import UnitKind


class EvalKind(str, enum.Enum):
    L = "L"
    S = "S"
    SQ = "SQ"


class Component(enum.IntEnum):
    """Tracked score components: six unit kinds then owned and carried resources."""

    MAINBASE = 0
    RAX = 1
    WORKER = 2
    LIGHT = 3
    RANGE = 4
    HEAVY = 5
    R = 6
    RW = 7


N_COMPONENTS = len(Component)
UNIT_COMPONENTS = tuple(Component(int(k)) for k in UnitKind)


@dataclass(frozen=True)
class WeightVector:
    W_MAINBASE: float
    W_RAX: float
    W_WORKER: float
    W_LIGHT: float
    W_RANGE: float
    W_HEAVY: float
    W_R: float
    W_RW: float

    @classmethod
    def from_sequence(cls, values) -> "WeightVector":
        values = [float(v) for v in values]
        if len(values) != N_COMPONENTS:
            raise ValueError(f"expected {N_COMPONENTS} weights, got {len(values)}")
        return cls(*values)

    def as_list(self) -> list[float]:
        return [getattr(self, f.name) for f in fields(self)]

    def __getitem__(self, component) -> float:
        return self.as_list()[int(component)]

    @classmethod
    def zeros(cls) -> "WeightVector":
        return cls(*([0.0] * N_COMPONENTS))

    def to_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class LanchesterParams:
    W_MAINBASE: float = 0.129
    W_RAX: float = 0.231
    W_WORKER: float = 0.181
    W_LIGHT: float = 1.75
    W_RANGE: float = 1.679
    W_HEAVY: float = 3.9
    attrition_exponent: float = 0.7
    W_carried: float = 1.0
    W_mined: float = 1.0

    def __post_init__(self):
        if not 0 < self.attrition_exponent <= 1:
            raise ValueError("attrition_exponent must lie in (0, 1]")
        if any(v < 0 for v in self.default_weights().as_list()):
            raise ValueError("Lanchester weights must be >= 0")

    def default_weights(self) -> WeightVector:
        return WeightVector(self.W_MAINBASE, self.W_RAX, self.W_WORKER, self.W_LIGHT,
                            self.W_RANGE, self.W_HEAVY, self.W_mined, self.W_carried)


@dataclass(frozen=True)
class SimpleParams:
    R: float = 20.0
    R_W: float = 10.0
    U_B: float = 40.0

    def __post_init__(self):
        if min(self.R, self.R_W, self.U_B) < 0:
            raise ValueError("Simple weights must be >= 0")

    def default_weights(self) -> WeightVector:
        u = self.U_B
        return WeightVector(u, u, u, u, u, u, self.R, self.R_W)


def default_weights(kind, lanchester: LanchesterParams | None = None,
                    simple: SimpleParams | None = None) -> WeightVector:
    if EvalKind(kind) == EvalKind.L:
        return (lanchester or LanchesterParams()).default_weights()
    return (simple or SimpleParams()).default_weights()
