"""Tri-state verdicts for predicates that finite data may not decide."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class State(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    state: State
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def held(self) -> bool:
        return self.state is State.HOLDS

    @property
    def failed(self) -> bool:
        return self.state is State.FAILS

    @property
    def inconclusive(self) -> bool:
        return self.state is State.INCONCLUSIVE

    def to_json(self) -> dict:
        return {"result": self.state.value, **_jsonable(self.detail)}

    def __repr__(self):
        return f"Verdict({self.state.value}, {self.detail!r})"


def holds(**detail) -> Verdict:
    return Verdict(State.HOLDS, detail)


def fails(**detail) -> Verdict:
    return Verdict(State.FAILS, detail)


def inconclusive(**detail) -> Verdict:
    return Verdict(State.INCONCLUSIVE, detail)


def all_of(verdicts, **detail) -> Verdict:
    """Conjunction: first failure wins, then any inconclusive, else holds."""
    verdicts = list(verdicts)
    for v in verdicts:
        if v.failed:
            return fails(**detail, witness=v.detail)
    for v in verdicts:
        if v.inconclusive:
            return inconclusive(**detail, evidence=v.detail)
    return holds(**detail)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Verdict):
        return obj.to_json()
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float):
        if obj != obj:
            return "nan"
        if obj in (float("inf"), float("-inf")):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, (str, int, bool)) or obj is None:
        return obj
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return str(obj)
