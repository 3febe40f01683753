"""Run configuration shared by probes, experiments, and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

DEFAULT_STEP_CAP = 10**6

STEP_CAP_ENV = "PARAMLAT_STEP_CAP"


@dataclass(frozen=True)
class Horizon:
    """Truncation parameters every verdict is stamped with.

    L bounds the universe (strings of length 1..L), H bounds parameter
    encodings, threshold is the finite surrogate for "infinitely many",
    and step_cap bounds simulated steps per operation.
    """

    L: int = 8
    H: int = 12
    threshold: int = 4
    step_cap: int = DEFAULT_STEP_CAP

    def with_cap(self, cap: int) -> "Horizon":
        return replace(self, step_cap=cap)

    def as_record(self) -> dict:
        return {
            "L": self.L,
            "H": self.H,
            "threshold": self.threshold,
            "step_cap": self.step_cap,
        }


def env_step_cap(default: int = DEFAULT_STEP_CAP) -> int:
    """Step cap, honoring the PARAMLAT_STEP_CAP override."""
    raw = os.environ.get(STEP_CAP_ENV)
    if raw is None:
        return default
    return int(raw)


DESK = Horizon()
