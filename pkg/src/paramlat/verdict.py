"""Three-valued horizon verdicts and the unresolved sentinel.

Probes of infinitary properties over a finite universe cannot always decide;
they answer holds, fails (with a witness checkable in isolation), or
unresolved, and every verdict carries the truncation parameters it was
computed under.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .config import Horizon


class _Unresolved:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "unresolved"

    def __bool__(self):
        return False


UNRESOLVED = _Unresolved()

HOLDS = "holds"
FAILS = "fails"
UNRESOLVED_TAG = "unresolved"


@dataclass(frozen=True)
class HorizonVerdict:
    status: str
    horizon: Horizon
    witness: Any = None
    note: str = ""

    @property
    def is_holds(self) -> bool:
        return self.status == HOLDS

    @property
    def is_fails(self) -> bool:
        return self.status == FAILS

    @property
    def is_unresolved(self) -> bool:
        return self.status == UNRESOLVED_TAG

    def as_record(self) -> dict:
        rec = {"status": self.status, "horizon": self.horizon.as_record()}
        if self.witness is not None:
            rec["witness"] = repr(self.witness)
        if self.note:
            rec["note"] = self.note
        return rec

    def __repr__(self):
        parts = [self.status]
        if self.witness is not None:
            parts.append(f"witness={self.witness!r}")
        if self.note:
            parts.append(self.note)
        return f"<{' '.join(parts)}>"


def holds(horizon: Horizon, note: str = "") -> HorizonVerdict:
    return HorizonVerdict(HOLDS, horizon, note=note)


def fails(witness: Any, horizon: Horizon, note: str = "") -> HorizonVerdict:
    return HorizonVerdict(FAILS, horizon, witness=witness, note=note)


def unresolved(horizon: Horizon, note: str = "", witness: Any = None) -> HorizonVerdict:
    return HorizonVerdict(UNRESOLVED_TAG, horizon, witness=witness, note=note)


@dataclass(frozen=True)
class InfinityWitness:
    """Element whose minimization value could not be resolved at the horizon."""

    x: str

    def __repr__(self):
        return f"inf@{self.x}"


class ParamlatError(Exception):
    """Base for workbench errors."""


class BudgetExhausted(ParamlatError):
    def __init__(self, operation: str, spent: int, cap: int):
        super().__init__(f"{operation}: spent {spent} simulated steps, cap {cap}")
        self.operation = operation
        self.spent = spent
        self.cap = cap
