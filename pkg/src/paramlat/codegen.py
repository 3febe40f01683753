"""Compile finite decision tables into tape programs.

The generated program walks a binary trie over the input cells: at each
depth it tests for blank (string ended -> leaf verdict), branches on the
cell value, and recurses after moving right.  Leaves either halt with the
tabled answer, jump out of the instruction range (halt, no output), or
enter a shared spin loop (diverge).  Runtime is linear in the input length,
so any compiled table is an approximation at exponent 1 with the default
scale.
"""

from __future__ import annotations

from typing import Callable, Optional

from .machines import ADDR_LIMIT, Approximation, Program, assemble
from .universe import Universe

ACCEPT = "accept"
REJECT = "reject"
NO_OUTPUT = "other"
DIVERGE = "diverge"

Verdict = str  # one of the four constants above


def compile_table(verdict: Callable[[str], Verdict], depth: int) -> Program:
    """Program deciding strings of length <= depth per the verdict table.

    Strings longer than depth run past the table and diverge; the empty
    prefix leaf is unreachable because inputs are nonempty.
    """
    lines = []
    fresh = iter(range(10**6))

    def emit_leaf(prefix: str):
        v = REJECT if prefix == "" else verdict(prefix)  # "" unreachable
        if v == ACCEPT:
            lines.append(("ACC",))
        elif v == REJECT:
            lines.append(("REJ",))
        elif v == NO_OUTPUT:
            # Leave [0, n) whatever the cell holds: blank test, then a 1 is
            # guaranteed after W1.
            lines.append(("JIB", "out"))
            lines.append(("W1",))
            lines.append(("JIO", "out"))
        elif v == DIVERGE:
            lines.append(("W1",))
            lines.append(("JIO", "spin"))
        else:
            raise ValueError(f"unknown verdict {v!r}")

    def node(prefix: str):
        end_label = f"n{next(fresh)}"
        lines.append(("JIB", end_label))
        if len(prefix) == depth:
            # Input longer than the table covers.
            lines.append(("W1",))
            lines.append(("JIO", "spin"))
        else:
            one_label = f"n{next(fresh)}"
            lines.append(("JIO", one_label))
            lines.append(("R",))
            node(prefix + "0")
            lines.append(("label", one_label))
            lines.append(("R",))
            node(prefix + "1")
        lines.append(("label", end_label))
        emit_leaf(prefix)

    node("")
    lines.append(("label", "spin"))
    lines.append(("W1",))
    lines.append(("JIO", "spin"))

    count = sum(1 for ln in lines if ln[0] != "label")
    if count >= ADDR_LIMIT:
        raise ValueError(f"table too large: {count} instructions")
    resolved = [
        (ln[0], count) if len(ln) == 2 and ln[1] == "out" else ln for ln in lines
    ]
    return assemble(resolved)


def decider_for(decided_set, u: Universe,
                within: Optional[Callable[[str], bool]] = None,
                exponent: int = 1, scale: int = 16) -> Approximation:
    """Approximation for the set whose domain is {x in u : within(x)}.

    Outside the requested domain the program halts without output; beyond
    u it diverges.
    """
    def table(x: str) -> Verdict:
        if within is not None and not within(x):
            return NO_OUTPUT
        return ACCEPT if decided_set.decide(x) else REJECT

    return Approximation(compile_table(table, u.max_len), exponent, scale)
