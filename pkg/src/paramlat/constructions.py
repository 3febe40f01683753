"""The three algorithmic centerpieces and instance complexity.

* A diagonal set that defeats budget-restricted machines while staying
  decidable stage by stage, with an invalidation experiment that documents
  the inversion-or-removal dichotomy per machine.
* Universal search through certified approximations, where a verified
  transcript registry stands in for a formal proof system.
* A budget-sharing accelerator that turns an approximation family into a
  parameterization escaping its witness.
* Brute-force instance complexity and the parameterization it induces.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from math import isqrt
from typing import Callable, Iterable, Optional, Sequence, Tuple

from .config import Horizon, env_step_cap
from .machines import (
    Approximation,
    Outcome,
    Program,
    RunResult,
    VirtualApproximation,
    domain,
    is_approximation_for,
    run,
)
from .params import Parameterization
from .slices import DecidedSet
from .spaces import NAT
from .universe import (
    Universe,
    cantor_pair,
    cantor_unpair,
    nat_to_str,
    pair_bits,
    str_to_nat,
)
from .verdict import UNRESOLVED, BudgetExhausted


# --- the diagonal set -------------------------------------------------------

@dataclass(frozen=True)
class DiagEvent:
    kind: str          # "removed" | "inverted" | "defaulted"
    machine: int       # index, 0 for "defaulted"
    input_code: int    # pair code the event happened at
    tested_code: int   # tested point for removals, else the input itself
    steps: int         # simulated steps spent on the deciding run


class DiagonalSet:
    """Self-referential set diagonalizing against budget-restricted machines.

    A string carries the pair code (c, w) of its dyadic position.  Stage one
    collects the machine indices up to the input length that stay consistent
    with the set's already-determined bits on a window of smaller points;
    stage two flips the first surviving machine that answers within budget
    exponent 2c.  Windows may mention the input itself or later points;
    those references read as 0, which makes the recursion well founded and
    the bit table order-independent.  Values are memoized (recomputation is
    otherwise exponential); memo hits charge no simulated steps.
    """

    def __init__(self, scale: int = 16, step_cap: Optional[int] = None):
        self.scale = scale
        self.step_cap = env_step_cap() if step_cap is None else step_cap
        self._memo: dict = {}
        self._run_cache: dict = {}
        self._spent = 0

    # machine simulation with shared accounting
    def _machine_result(self, index: int, input_str: str, budget: int) -> RunResult:
        key = (index, input_str, budget)
        got = self._run_cache.get(key)
        if got is None:
            got = run(Program.from_index(index), input_str, budget)
            self._spent += got.steps
            if self._spent > self.step_cap:
                raise BudgetExhausted("diagonal-set", self._spent, self.step_cap)
            self._run_cache[key] = got
        return got

    def _bit_for(self, code: int, current: int) -> int:
        # References at or past the point being determined read as 0.
        if code >= current:
            return 0
        return self._evaluate(code)

    def _evaluate(self, code: int, events: Optional[list] = None) -> int:
        if events is None:
            got = self._memo.get(code)
            if got is not None:
                return got
        c, w = cantor_unpair(code)
        if c < 1 or w < 1:
            self._memo[code] = 0
            return 0
        s = nat_to_str(code)
        n = len(s)
        survivors = list(range(1, n + 1))
        for d in range(1, c + 1):
            for y in range(1, n + 1):
                tested = cantor_pair(d, y)
                expected = self._bit_for(tested, code)
                t_str = nat_to_str(tested)
                budget = self.scale * len(t_str) ** (2 * c)
                kept = []
                for i in survivors:
                    res = self._machine_result(i, t_str, budget)
                    if res.outcome.is_decision and res.outcome.bit != expected:
                        if events is not None:
                            events.append(DiagEvent("removed", i, code, tested,
                                                    res.steps))
                        continue
                    kept.append(i)
                survivors = kept
        budget = self.scale * n ** (2 * c)
        for i in survivors:
            res = self._machine_result(i, s, budget)
            if res.outcome.is_decision:
                bit = 1 - res.outcome.bit
                if events is not None:
                    events.append(DiagEvent("inverted", i, code, code, res.steps))
                self._memo[code] = bit
                return bit
        if events is not None:
            events.append(DiagEvent("defaulted", 0, code, code, 0))
        self._memo[code] = 0
        return 0

    def decide_code(self, code: int) -> int:
        """Bit of the set at a pair code; codes without c >= 1, w >= 1 are 0."""
        self._spent = 0
        # Fill bottom-up so recursion depth stays flat for large codes.
        for v in self._pending_below(code):
            self._evaluate(v)
        return self._evaluate(code)

    def _pending_below(self, code: int) -> list:
        """Unevaluated codes the evaluation of `code` can reach, ascending."""
        needed = set()
        frontier = [code]
        while frontier:
            v = frontier.pop()
            if v in needed or v in self._memo:
                continue
            needed.add(v)
            c, w = cantor_unpair(v)
            if c < 1 or w < 1:
                continue
            n = len(nat_to_str(v))
            for d in range(1, c + 1):
                for y in range(1, n + 1):
                    t = cantor_pair(d, y)
                    if t < v and t not in self._memo:
                        frontier.append(t)
        return sorted(needed)

    def decide(self, x: str) -> bool:
        return bool(self.decide_code(str_to_nat(x)))

    def trace(self, code: int) -> Tuple[int, list]:
        """Bit plus the stage events of one evaluation (sub-evaluations are
        served from the memo and contribute no events)."""
        self.decide_code(code)  # ensure dependencies are resolved
        events: list = []
        self._memo.pop(code, None)
        bit = self._evaluate(code, events=events)
        return bit, events

    def survivors_at(self, code: int) -> list:
        """Stage-two entry set for an input, for experiment bookkeeping."""
        c, w = cantor_unpair(code)
        if c < 1 or w < 1:
            return []
        self.decide_code(code)
        s = nat_to_str(code)
        n = len(s)
        survivors = list(range(1, n + 1))
        for d in range(1, c + 1):
            for y in range(1, n + 1):
                tested = cantor_pair(d, y)
                expected = self._bit_for(tested, code)
                t_str = nat_to_str(tested)
                budget = self.scale * len(t_str) ** (2 * c)
                survivors = [
                    i for i in survivors
                    if not (
                        (res := self._machine_result(i, t_str, budget)).outcome.is_decision
                        and res.outcome.bit != expected
                    )
                ]
        return survivors


def diag_decide(code: int, scale: int = 16,
                step_cap: Optional[int] = None,
                shared: Optional[DiagonalSet] = None) -> int:
    """Bit of the diagonal set at a pair code (c >= 1 required of members)."""
    d = shared if shared is not None else DiagonalSet(scale, step_cap)
    return d.decide_code(code)


def diagonal_set(scale: int = 16, step_cap: Optional[int] = None) -> DecidedSet:
    d = DiagonalSet(scale, step_cap)
    return DecidedSet("diagonal", d.decide)


@dataclass(frozen=True)
class MachineReport:
    index: int
    qualifying_points: int
    inversions: Tuple[int, ...]        # input codes where this machine was flipped
    removals: Tuple[int, ...]          # input codes where it was dropped in stage 1
    smaller_events: Tuple[Tuple[int, int], ...]  # (machine, input code), machine < index

    @property
    def resolved(self) -> bool:
        return bool(self.inversions or self.removals or self.smaller_events)


@dataclass(frozen=True)
class DiagExperimentReport:
    exponent: int
    i_max: int
    machines: Tuple[MachineReport, ...]
    scanned_inputs: Tuple[int, ...]

    def csv_rows(self) -> list:
        rows = []
        for m in self.machines:
            for code in m.inversions:
                rows.append((m.index, "inversion", code, 0))
            for code in m.removals:
                rows.append((m.index, "removal", code, 0))
            for j, code in m.smaller_events:
                rows.append((m.index, f"smaller-removed:{j}", code, 0))
            if not m.resolved:
                rows.append((m.index, "unresolved", 0, 0))
        return rows


def _qualifying_inputs(c: int, length_cap: int, per_length: int = 1) -> list:
    """Ascending pair codes with first coordinate just above c, at most
    per_length per (coordinate, string length)."""
    out = []
    for n in range(2, length_cap + 1):
        lo, hi = (1 << n) - 1, (1 << (n + 1)) - 2
        for d in (c + 1, c + 2):
            found = 0
            # code = (d+w)(d+w+1)/2 + w is increasing in w; start near the root.
            w = max(1, isqrt(2 * lo) - d - 2)
            while found < per_length:
                v = cantor_pair(d, w)
                if v > hi:
                    break
                if v >= lo and w >= 1:
                    out.append(v)
                    found += 1
                w += 1
    return sorted(set(out))


def diag_invalidation_experiment(c: int, i_max: int, horizon: Horizon,
                                 scale: int = 16,
                                 length_cap: Optional[int] = None,
                                 threshold: Optional[int] = None,
                                 ) -> DiagExperimentReport:
    """Scan qualifying inputs and log, per enumerated machine, the first
    stage-two inversion, its own stage-one removals, and the removals or
    inversions of smaller indices it witnessed while still in play."""
    t = horizon.threshold if threshold is None else threshold
    cap = length_cap if length_cap is not None else i_max + 6
    diag = DiagonalSet(scale=scale, step_cap=max(horizon.step_cap, 10**7))
    inputs = _qualifying_inputs(c, cap)

    restricted = {i: Approximation(Program.from_index(i), 2 * c + 2, scale)
                  for i in range(1, i_max + 1)}
    qualifying = {}
    for i, approx in restricted.items():
        pts = 0
        for v in inputs:
            s = nat_to_str(v)
            if approx.outcome(s).outcome.is_decision:
                pts += 1
        qualifying[i] = pts

    inversions = {i: [] for i in restricted}
    removals = {i: [] for i in restricted}
    smaller = {i: [] for i in restricted}

    for v in inputs:
        bit, events = diag.trace(v)
        survivors = diag.survivors_at(v)
        flipped = [e for e in events if e.kind == "inverted"]
        for e in events:
            if e.machine in restricted:
                if e.kind == "inverted":
                    inversions[e.machine].append(v)
                elif e.kind == "removed":
                    removals[e.machine].append(v)
        for e in events:
            if e.kind in ("inverted", "removed"):
                for i in survivors:
                    if i in restricted and e.machine < i:
                        smaller[i].append((e.machine, v))

    reports = []
    for i in sorted(restricted):
        reports.append(MachineReport(
            index=i,
            qualifying_points=qualifying[i],
            inversions=tuple(inversions[i]),
            removals=tuple(removals[i]),
            smaller_events=tuple(smaller[i]),
        ))
    return DiagExperimentReport(c, i_max, tuple(reports), tuple(inputs))


# --- universal search through certified approximations ----------------------

class UnverifiedCertificate(Exception):
    pass


@dataclass(frozen=True)
class Certificate:
    """Transcript-backed claim that a program approximates a set.

    The transcript lists (input, expected bit) checks; verification replays
    every entry within the claimed budget and compares against the target
    oracle.  This is the workbench's stand-in for a machine-checkable proof:
    length-bounded search over certificates keeps the structure of searching
    over proofs.
    """

    program: Program
    exponent: int
    scale: int
    transcript: Tuple[Tuple[str, int], ...]
    verified: bool = False

    def encoding(self) -> str:
        tbits = "".join(pair_bits(x, format(b, "b")) for x, b in self.transcript)
        payload = pair_bits(format(self.exponent, "b"), tbits or "0")
        return pair_bits(self.program.code, payload)

    def __len__(self) -> int:
        return len(self.encoding())

    @property
    def approximation(self) -> Approximation:
        return Approximation(self.program, self.exponent, self.scale)


def verify_certificate(cert: Certificate, target: DecidedSet) -> Certificate:
    for x, expected in cert.transcript:
        if bool(expected) != target.decide(x):
            return replace(cert, verified=False)
        res = cert.approximation.outcome(x)
        if not res.outcome.is_decision or res.outcome.bit != expected:
            return replace(cert, verified=False)
    return replace(cert, verified=True)


def make_certificate(approx: Approximation, target: DecidedSet,
                     u: Universe) -> Certificate:
    """Certificate whose transcript is the full decided trace on u."""
    transcript = []
    for x in u:
        res = approx.outcome(x)
        if res.outcome.is_decision:
            transcript.append((x, res.outcome.bit))
    cert = Certificate(approx.program, approx.exponent, approx.scale,
                       tuple(transcript))
    return verify_certificate(cert, target)


def universal_search_decide(x: str, k: int, registry: Sequence[Certificate],
                            ) -> RunResult:
    """Run every certified program with certificate and code length at most
    k on x, inside its claimed budget; first 0/1 answer wins."""
    for cert in registry:
        if not cert.verified:
            raise UnverifiedCertificate(
                f"registry entry {cert.program.code[:12]}... is unverified")
    total_steps = 0
    for cert in registry:
        if len(cert) > k or len(cert.program.code) > k:
            continue
        res = cert.approximation.outcome(x)
        total_steps += res.steps
        if res.outcome.is_decision:
            return RunResult(res.outcome, total_steps)
    return RunResult(Outcome.OTHER, total_steps)


def search_parameterization(registry: Sequence[Certificate],
                            name: str = "search") -> Parameterization:
    """Parameter value = length allowance for (certificate, program)."""
    def needed(x) -> Optional[int]:
        best = None
        for cert in registry:
            if cert.approximation.outcome(x).outcome.is_decision:
                need = max(len(cert), len(cert.program.code))
                if best is None or need < best:
                    best = need
        return best

    cache: dict = {}

    def needed_cached(x):
        if x not in cache:
            cache[x] = needed(x)
        return cache[x]

    def contains(x, k):
        n = needed_cached(x)
        return n is not None and n <= k

    def min_hint(x):
        n = needed_cached(x)
        return UNRESOLVED if n is None else n

    return Parameterization(NAT, contains, min_element_hint=min_hint, name=name)


# --- the accelerator --------------------------------------------------------

class Accelerated:
    """Budget-shared simulation of an approximation family.

    Within a total budget of k * n**(c+2) steps the members are simulated in
    enumeration order, each charged its full per-call cap scale * n**c plus
    one step of accounting overhead.  Charging the cap instead of actual
    steps makes the number of completed simulations an exact floor, which is
    the quantity the escape argument leans on; answers are unaffected
    because every member that would answer inside the shared budget is still
    reached.
    """

    def __init__(self, family: Sequence, exponent: int, scale: int = 16):
        self.family = list(family)
        self.exponent = exponent
        self.scale = scale

    def per_call(self, n: int) -> int:
        return self.scale * n**self.exponent + 1

    def total_budget(self, k: int, n: int) -> int:
        return k * n ** (self.exponent + 2)

    def simulation_count(self, x: str, k: int) -> int:
        return min(len(self.family),
                   self.total_budget(k, len(x)) // self.per_call(len(x)))

    def answer_cost(self, x: str) -> Optional[int]:
        """Cumulative charge up to the first member that decides x."""
        spent = 0
        for m in self.family:
            spent += self.per_call(len(x))
            if m.outcome(x).outcome.is_decision:
                return spent
        return None

    def decide(self, x: str, k: int) -> RunResult:
        budget = self.total_budget(k, len(x))
        spent = 0
        for m in self.family:
            spent += self.per_call(len(x))
            if spent > budget:
                return RunResult(Outcome.OUT_OF_BUDGET, budget)
            res = m.outcome(x)
            if res.outcome.is_decision:
                return RunResult(res.outcome, spent)
        return RunResult(Outcome.OTHER, spent)


def accelerate(family: Sequence, exponent: int, scale: int = 16,
               name: str = "accelerated") -> Parameterization:
    """Parameterization decided by the budget-shared family simulation."""
    acc = Accelerated(family, exponent, scale)
    cost_cache: dict = {}

    def cost(x):
        if x not in cost_cache:
            cost_cache[x] = acc.answer_cost(x)
        return cost_cache[x]

    def contains(x, k):
        b = cost(x)
        return b is not None and k * len(x) ** (exponent + 2) >= b

    def min_hint(x):
        b = cost(x)
        if b is None:
            return UNRESOLVED
        return -(-b // len(x) ** (exponent + 2))

    e = Parameterization(NAT, contains, min_element_hint=min_hint, name=name)
    e.engine = acc
    return e


# --- instance complexity ----------------------------------------------------

class _AboveM:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "above_m"


ABOVE_M = _AboveM()


@lru_cache(maxsize=32)
def _ic_scan(target: DecidedSet, exponent: int, max_code_len: int,
             u: Universe, scale: int) -> tuple:
    """(table, qualifying) where table maps x to its least deciding code
    length and qualifying lists (code, domain) of admitted programs."""
    table: dict = {}
    qualifying = []
    for i in range(1, 2 ** (max_code_len + 1) - 1):
        code = nat_to_str(i)
        if len(code) > max_code_len:
            break
        approx = Approximation(Program(code), exponent, scale)
        ok = True
        for x in u:
            res = approx.outcome(x)
            if res.outcome.is_decision and bool(res.outcome.bit) != target.decide(x):
                ok = False
                break
        if not ok:
            continue
        dom = domain(approx, u)
        if dom:
            qualifying.append((code, dom))
            for x in dom:
                if x not in table:
                    table[x] = len(code)
    return table, tuple(qualifying)


def instance_complexity(x: str, target: DecidedSet, exponent: int,
                        max_code_len: int, u: Universe, scale: int = 16):
    """Least code length, among programs of length <= max_code_len that
    approximate the target on u at the given budget exponent, of one that
    decides x; ABOVE_M when none does."""
    table, _ = _ic_scan(target, exponent, max_code_len, u, scale)
    return table.get(x, ABOVE_M)


def ic_parameterization(target: DecidedSet, exponent: int, max_code_len: int,
                        u: Universe, scale: int = 16,
                        name: str = "") -> Parameterization:
    """Admit x at every allowance at least its instance complexity."""
    table, qualifying = _ic_scan(target, exponent, max_code_len, u, scale)

    def contains(x, k):
        v = table.get(x)
        return v is not None and v <= k

    def min_hint(x):
        v = table.get(x)
        return UNRESOLVED if v is None else v

    e = Parameterization(NAT, contains, min_element_hint=min_hint,
                         name=name or f"ic({target.name})")
    e.qualifying = qualifying
    return e


def ic_slice_dispatcher(e: Parameterization, k: int, exponent: int,
                        scale: int = 16) -> VirtualApproximation:
    """Single procedure deciding the allowance-k slice: dispatch over the
    qualifying programs short enough for the allowance."""
    progs = [(code, dom) for code, dom in e.qualifying if len(code) <= k]

    def decide(x):
        for code, dom in progs:
            if x in dom:
                res = Approximation(Program(code), exponent, scale).outcome(x)
                return res.outcome.bit
        return None

    return VirtualApproximation(decide, exponent, scale,
                                name=f"ic-dispatch@{k}")
