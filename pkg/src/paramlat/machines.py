"""Enumerable tape machines with step-budgeted simulation.

The machine model is a minimal instruction list over a single tape whose
cells hold 0, 1, or blank.  Inputs are written at positions 0..n-1, the head
starts at position 0, and execution starts at instruction 0.  Every bit
string decodes to a program (greedy left-to-right decoding, incomplete
trailing bits ignored), so machine index i and program code are in bijection
through the dyadic string/number correspondence.

Instruction encoding (see docs/machine.md for the normative table):

    000  R      move head right
    001  L      move head left
    010  W0     write 0 at the head
    011  W1     write 1 at the head
    100  REJ    halt with output 0
    101  ACC    halt with output 1
    110  JIO a  jump to absolute address a (12 bits) if the cell reads 1
    111  JIB a  jump to absolute address a (12 bits) if the cell is blank

Running off either end of the instruction list halts without output
("other").  Every executed instruction costs one step; simulated steps are
charged 1:1 against the budget.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Tuple

from .universe import Universe, nat_to_str, str_to_nat
from .verdict import HorizonVerdict, fails, holds
from .config import Horizon

ADDR_BITS = 12
ADDR_LIMIT = 1 << ADDR_BITS

_PLAIN_OPS = {"000": "R", "001": "L", "010": "W0", "011": "W1", "100": "REJ", "101": "ACC"}
_JUMP_OPS = {"110": "JIO", "111": "JIB"}
_OP_BITS = {v: k for k, v in {**_PLAIN_OPS, **_JUMP_OPS}.items()}


class Outcome(enum.Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    OTHER = "other"
    OUT_OF_BUDGET = "out_of_budget"

    @property
    def is_decision(self) -> bool:
        return self in (Outcome.ACCEPT, Outcome.REJECT)

    @property
    def bit(self) -> Optional[int]:
        if self is Outcome.ACCEPT:
            return 1
        if self is Outcome.REJECT:
            return 0
        return None


class RunResult(NamedTuple):
    outcome: Outcome
    steps: int


def decode_instructions(code: str) -> tuple:
    """Greedy decode; trailing bits that do not complete an instruction drop."""
    out = []
    i = 0
    n = len(code)
    while i + 3 <= n:
        op = code[i : i + 3]
        if op in _PLAIN_OPS:
            out.append((_PLAIN_OPS[op], 0))
            i += 3
        else:
            if i + 3 + ADDR_BITS > n:
                break
            addr = int(code[i + 3 : i + 3 + ADDR_BITS], 2)
            out.append((_JUMP_OPS[op], addr))
            i += 3 + ADDR_BITS
    return tuple(out)


@dataclass(frozen=True)
class Program:
    """An encoded machine; its index is its dyadic position in 2^+."""

    code: str

    @property
    def index(self) -> int:
        return str_to_nat(self.code)

    @staticmethod
    def from_index(i: int) -> "Program":
        return Program(nat_to_str(i))

    @property
    def instructions(self) -> tuple:
        return decode_instructions(self.code)

    def __len__(self) -> int:
        return len(self.code)


@lru_cache(maxsize=8192)
def _instructions_for(code: str) -> tuple:
    return decode_instructions(code)


def run(program: Program, x: str, budget: int) -> RunResult:
    """Simulate program on input x for at most budget steps.

    Pure function of (code, input, budget): identical arguments always give
    identical results.  steps <= budget always holds.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    instrs = _instructions_for(program.code)
    n_instr = len(instrs)
    tape = dict(enumerate(x))
    pos = 0
    pc = 0
    steps = 0
    while True:
        if pc < 0 or pc >= n_instr:
            return RunResult(Outcome.OTHER, steps)
        if steps >= budget:
            return RunResult(Outcome.OUT_OF_BUDGET, steps)
        op, arg = instrs[pc]
        steps += 1
        if op == "R":
            pos += 1
            pc += 1
        elif op == "L":
            pos -= 1
            pc += 1
        elif op == "W0":
            tape[pos] = "0"
            pc += 1
        elif op == "W1":
            tape[pos] = "1"
            pc += 1
        elif op == "REJ":
            return RunResult(Outcome.REJECT, steps)
        elif op == "ACC":
            return RunResult(Outcome.ACCEPT, steps)
        elif op == "JIO":
            pc = arg if tape.get(pos) == "1" else pc + 1
        else:  # JIB
            pc = arg if tape.get(pos) is None else pc + 1


@dataclass(frozen=True)
class Approximation:
    """A program run under the budget scale * n**exponent."""

    program: Program
    exponent: int
    scale: int = 16

    def budget(self, n: int) -> int:
        return self.scale * n**self.exponent

    def outcome(self, x: str) -> RunResult:
        return run(self.program, x, self.budget(len(x)))

    def describe(self) -> str:
        return f"machine[{len(self.program.code)}b]^{self.exponent}"


class VirtualApproximation:
    """Oracle-backed stand-in with the same surface as Approximation.

    decide(x) returns 1, 0, or None (no output).  Charged cost per call is
    min(cost(x), budget) so step accounting stays comparable with real
    machines.  Used for combined dispatchers and transformed procedures whose
    machine code is never materialized.
    """

    def __init__(self, decide: Callable[[str], Optional[int]], exponent: int,
                 scale: int = 16, cost: Optional[Callable[[str], int]] = None,
                 name: str = "virtual"):
        self.decide = decide
        self.exponent = exponent
        self.scale = scale
        self._cost = cost
        self.name = name

    def budget(self, n: int) -> int:
        return self.scale * n**self.exponent

    def outcome(self, x: str) -> RunResult:
        budget = self.budget(len(x))
        cost = self._cost(x) if self._cost is not None else len(x)
        cost = min(cost, budget)
        bit = self.decide(x)
        if bit == 1:
            return RunResult(Outcome.ACCEPT, cost)
        if bit == 0:
            return RunResult(Outcome.REJECT, cost)
        return RunResult(Outcome.OTHER, cost)

    def describe(self) -> str:
        return f"{self.name}^{self.exponent}"


def restrict(program: Program, exponent: int, scale: int = 16) -> Approximation:
    """Time-restrict a program; domains grow monotonically with the exponent."""
    if exponent < 1:
        raise ValueError("exponent must be >= 1")
    return Approximation(program, exponent, scale)


_domain_cache: dict = {}


def domain(approx, u: Universe) -> frozenset:
    """Strings of u on which the approximation halts with 0/1 in budget."""
    key = None
    if isinstance(approx, Approximation):
        key = (approx.program.code, approx.exponent, approx.scale, u.max_len)
        cached = _domain_cache.get(key)
        if cached is not None:
            return cached
    result = frozenset(x for x in u if approx.outcome(x).outcome.is_decision)
    if key is not None:
        _domain_cache[key] = result
    return result


def is_approximation_for(approx, decided_set, u: Universe,
                         horizon: Horizon) -> HorizonVerdict:
    """Check that every 0/1 answer agrees with the reference set on u."""
    for x in u:
        res = approx.outcome(x)
        if res.outcome.is_decision and bool(res.outcome.bit) != decided_set.decide(x):
            return fails(x, horizon, note="answer disagrees with reference")
    return holds(horizon)


class NotTotalOnUniverse(Exception):
    def __init__(self, x: str):
        super().__init__(f"program gives no 0/1 output on {x!r} within the cap")
        self.x = x


# --- assembly -------------------------------------------------------------

def assemble(lines) -> Program:
    """Two-pass assembler.  Lines are ("label", name) or (op,) / (op, target)
    where a jump target is a label name or an absolute address."""
    labels = {}
    instrs = []
    for line in lines:
        if line[0] == "label":
            labels[line[1]] = len(instrs)
        else:
            instrs.append(line)
    bits = []
    for line in instrs:
        op = line[0]
        bits.append(_OP_BITS[op])
        if op in ("JIO", "JIB"):
            target = line[1]
            addr = labels[target] if isinstance(target, str) else target
            if not 0 <= addr < ADDR_LIMIT:
                raise ValueError(f"jump target {addr} out of range")
            bits.append(format(addr, f"0{ADDR_BITS}b"))
    return Program("".join(bits))


REJECT_ALL = Program("100")
ACCEPT_ALL = Program("101")

# Writes a 1, then spins on it forever.
DIVERGER = assemble([("label", "loop"), ("W1",), ("JIO", "loop")])

# Accepts exactly the strings with an odd number of ones.  Two interleaved
# scan loops carry the running parity in the program counter; consumed cells
# are overwritten to make unconditional jumps possible.
PARITY_ODD = assemble([
    ("L",),
    ("label", "even"),
    ("R",),
    ("JIB", "rej"),
    ("JIO", "odd"),
    ("W1",),
    ("JIO", "even"),
    ("label", "odd"),
    ("R",),
    ("JIB", "acc"),
    ("JIO", "even"),
    ("W1",),
    ("JIO", "odd"),
    ("label", "acc"),
    ("ACC",),
    ("label", "rej"),
    ("REJ",),
])

# Accepts exactly the strings whose first symbol is 1.
PREFIX_ONE = assemble([("JIO", "acc"), ("REJ",), ("label", "acc"), ("ACC",)])


def program_to_hex(program: Program) -> str:
    """len:hex serialization used in scenario and registry files."""
    code = program.code
    return f"{len(code)}:{format(int(code, 2), 'x') if code else '0'}"


def program_from_hex(text: str) -> Program:
    length_part, _, hex_part = text.partition(":")
    length = int(length_part)
    value = int(hex_part, 16)
    code = format(value, "b").zfill(length)
    if len(code) != length:
        raise ValueError(f"hex payload does not fit length {length}: {text!r}")
    return Program(code)
