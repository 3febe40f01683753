"""Named building blocks shared by the CLI and the experiment suites.

Everything here is deterministic: the same name always denotes the same
object, so scenario runs and acceptance checks are reproducible byte for
byte.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence

from .codegen import decider_for
from .config import Horizon
from .constructions import (
    Certificate,
    accelerate,
    diagonal_set,
    ic_parameterization,
    make_certificate,
)
from .machines import (
    ACCEPT_ALL,
    DIVERGER,
    PARITY_ODD,
    PREFIX_ONE,
    REJECT_ALL,
    Approximation,
    Outcome,
    RunResult,
    VirtualApproximation,
    domain,
)
from .params import (
    Parameterization,
    by_length,
    from_coverage,
    from_function,
    from_slices,
    from_runtime,
    full,
    join,
    meet,
)
from .slices import (
    ALL,
    EMPTY,
    MAJORITY,
    PARITY,
    PREFIX1,
    DecidedSet,
    SliceFamily,
    lli_cylinder,
    make_family,
)
from .spaces import NAT, FiniteSpace, NatSpace, ProductSpace
from .universe import Universe, str_to_nat


# --- decided sets ------------------------------------------------------------

def builtin_set(name: str) -> DecidedSet:
    base = {s.name: s for s in (EMPTY, ALL, PARITY, MAJORITY, PREFIX1)}
    if name in base:
        return base[name]
    if name == "diagonal":
        return _diagonal()
    if name.startswith("cylinder(") and name.endswith(")"):
        inner = builtin_set(name[len("cylinder("):-1])
        return lli_cylinder(inner)[0]
    raise KeyError(f"unknown set {name!r}")


@lru_cache(maxsize=1)
def _diagonal() -> DecidedSet:
    return diagonal_set()


SET_NAMES = ("empty", "all", "parity", "majority", "prefix1",
             "cylinder(prefix1)", "diagonal")


# --- programs ----------------------------------------------------------------

BUILTIN_PROGRAMS = {
    "reject_all": REJECT_ALL,
    "accept_all": ACCEPT_ALL,
    "diverger": DIVERGER,
    "parity_odd": PARITY_ODD,
    "prefix_one": PREFIX_ONE,
}


# --- slice families ----------------------------------------------------------

def _nested_domains(u: Universe, count: int, cap_len: Optional[int] = None):
    """A chain of `count` nested domains: length cutoffs interleaved with a
    half step that also admits the 1-prefixed strings one length further."""
    cap = u.max_len if cap_len is None else cap_len
    preds: List[Callable[[str], bool]] = [lambda x: False]
    j = 1
    while len(preds) < count:
        cutoff = min(j, cap)
        preds.append(lambda x, c=cutoff: len(x) <= c)
        if len(preds) < count:
            nxt = min(j + 1, cap)
            preds.append(lambda x, c=cutoff, d=nxt:
                         len(x) <= c or (x[0] == "1" and len(x) <= d))
        j += 1
    return preds[:count]


@lru_cache(maxsize=64)
def chain_family(set_name: str, u: Universe, count: int, horizon: Horizon,
                 cap_len: Optional[int] = None) -> SliceFamily:
    """Validated nested family of table-compiled deciders for a built-in set.

    With cap_len below u.max_len the family has no total member, which keeps
    slicewise-decidability predicates built from it nonvacuous.
    """
    target = builtin_set(set_name)
    members = [decider_for(target, u, within=p)
               for p in _nested_domains(u, count, cap_len)]
    return make_family(target, members, u, horizon)


# --- reference parameterizations ----------------------------------------------

def ones(x: str) -> int:
    return x.count("1")


def zeros(x: str) -> int:
    return x.count("0")


def leading_zeros(x: str) -> int:
    return len(x) - len(x.lstrip("0"))


def _doubling_coverage(u: Universe) -> Parameterization:
    """Slice i covers the first 2**i strings: x_j enters at ceil(log2 j)."""
    order = {x: i for i, x in enumerate(u.strings(), start=1)}

    def cover(x):
        j = order.get(x)
        if j is None:
            return None
        return max(1, (j - 1).bit_length())

    return from_coverage(cover, name="doubling")


def _slow_chain(u: Universe, stride: int = 32, block: int = 4
                ) -> Parameterization:
    """Coverage creeps in blocks: the b-th block of `block` strings enters
    at index stride*b.  Late blocks only resolve past any reasonable
    horizon (the unresolved tail), while every unsaturated slice still
    extends by at least a block."""
    order = {x: i for i, x in enumerate(u.strings(), start=1)}

    def cover(x):
        j = order.get(x)
        if j is None:
            return None
        return stride * ((j + block - 1) // block)

    return from_coverage(cover, name=f"slow{stride}x{block}")


def _short_chain(u: Universe, size: int = 20) -> Parameterization:
    strings = u.strings()[:size]
    sets = [frozenset(strings[: i + 1]) for i in range(size)]
    return from_slices(sets, name=f"chain{size}")


def sample_parameterizations(u: Universe, horizon: Horizon
                             ) -> List[Parameterization]:
    """Twenty at-horizon-total parameterizations for the order-law suites."""
    parity_rt = from_runtime(PARITY_ODD, u, horizon.step_cap, name="rt-parity")
    prefix_rt = from_runtime(PREFIX_ONE, u, horizon.step_cap, name="rt-prefix1")
    e_full = full(NAT)
    e_len = by_length()
    e_ones = from_function(ones, name="fn-ones")
    e_zeros = from_function(zeros, name="fn-zeros")
    e_lead = from_function(leading_zeros, name="fn-leadzeros")
    # Parameter values in join operands stay below 16 so the product codes
    # of any two members still encode within the desk horizon.
    e_pos = from_function(lambda x: min(str_to_nat(x), 15), name="fn-pos15")
    e_db = _doubling_coverage(u)
    e_ic = ic_parameterization(EMPTY, 2, 10, u)
    fam = escape_family(u, "parity")
    e_acc = accelerate(fam, exponent=1, scale=1, name="acc-parity")
    return [
        e_full,
        e_len,
        e_ones,
        e_zeros,
        e_lead,
        e_pos,
        e_db,
        parity_rt,
        prefix_rt,
        e_ic,
        e_acc,
        meet(e_len, e_ones),
        join(e_len, e_ones),
        meet(e_full, e_len),
        join(e_full, e_len),
        meet(e_ones, e_zeros),
        join(e_ones, e_zeros),
        meet(e_db, e_len),
        join(e_full, prefix_rt),
        from_slices([frozenset(x for x in u if len(x) <= j)
                     for j in range(1, u.max_len + 1)], name="len-chain"),
    ]


def imix_pairs(u: Universe, horizon: Horizon):
    """(imix, non-imix) pairs whose separation manifests inside the horizon:
    the imix side keeps unresolved strings, the non-imix side saturates."""
    slow = _slow_chain(u)
    slow2 = _slow_chain(u, stride=64)
    short = _short_chain(u)
    e_full = full(NAT)
    return [
        (slow, e_full),
        (slow, short),
        (slow2, e_full),
        (slow2, short),
        (slow, meet(e_full, short)),
    ]


# --- escape-witness family ----------------------------------------------------

class CoverageDecider:
    """Virtual approximation deciding a set on the first `cover` strings."""

    def __init__(self, target: DecidedSet, u: Universe, cover: int,
                 exponent: int = 1, scale: int = 1):
        self.target = target
        self.exponent = exponent
        self.scale = scale
        self._members = frozenset(u.strings()[:cover])
        self.name = f"cover{cover}"

    def budget(self, n: int) -> int:
        return self.scale * n**self.exponent

    def outcome(self, x: str) -> RunResult:
        cost = min(self.budget(len(x)), max(1, len(x)))
        if x in self._members:
            bit = self.target.decide(x)
            return RunResult(Outcome.ACCEPT if bit else Outcome.REJECT, cost)
        return RunResult(Outcome.OTHER, cost)

    def describe(self) -> str:
        return self.name


def escape_witness(u: Universe, stride: int = 32, block: int = 4
                   ) -> Parameterization:
    return _slow_chain(u, stride, block)


def escape_family(u: Universe, set_name: str, stride: int = 32,
                  block: int = 4, members: int = 64) -> list:
    """Deciders of the slow chain's slices at doubling index jumps: member j
    covers the slice at index 2**j, so high slices are reached after
    simulating only j members."""
    target = builtin_set(set_name)
    fam = []
    for j in range(1, members + 1):
        covered = min(len(u.strings()), block * ((2**j) // stride))
        fam.append(CoverageDecider(target, u, covered))
    return fam


def builtin_param(name: str, u: Universe, horizon: Horizon) -> Parameterization:
    """Named parameterizations usable from scenario files."""
    if name == "doubling":
        return _doubling_coverage(u)
    if name.startswith("slow"):
        stride = int(name[len("slow"):])
        return _slow_chain(u, stride)
    if name.startswith("chain"):
        return _short_chain(u, int(name[len("chain"):]))
    if name == "escape-witness":
        return escape_witness(u)
    if name.startswith("accelerated(") and name.endswith(")"):
        set_name = name[len("accelerated("):-1]
        return accelerate(escape_family(u, set_name), exponent=1, scale=1,
                          name=f"acc-{set_name}")
    if name.startswith("ic(") and name.endswith(")"):
        set_name = name[len("ic("):-1]
        return ic_parameterization(builtin_set(set_name), 2, 10, u)
    raise KeyError(f"unknown builtin parameterization {name!r}")


# --- filter-law sample ---------------------------------------------------------

def filter_sample(u: Universe, set_name: str, horizon: Horizon):
    """(L, member_predicate) for the slicewise-decidability filter check.

    The family is capped below the universe, so parameterizations with
    full-width slices genuinely fall outside the filter.
    """
    fam = chain_family(set_name, u, 14, horizon, cap_len=u.max_len - 2)
    doms = fam.domains(u)
    top = frozenset().union(*doms) if doms else frozenset()

    def member(e: Parameterization) -> bool:
        for k in e.space.elements_up_to(horizon.H):
            if len(e.space.encode(k)) > horizon.H:
                continue
            sl = e.slice_at(k, u)
            if not any(sl <= d for d in doms):
                return False
        return True

    small = [frozenset(x for x in u if len(x) <= j) for j in range(1, 5)]
    inside = [
        from_slices(small[:1], name="f-len1"),
        from_slices(small[:2], name="f-len2"),
        from_slices(small[:3], name="f-len3"),
        from_slices(small, name="f-len4"),
        from_slices([frozenset(x for x in u if len(x) <= 3 and x[0] == "1")],
                    name="f-ones3"),
    ]
    layered = inside + [
        meet(inside[0], inside[3]),
        meet(inside[1], inside[4]),
        join(inside[2], inside[3]),
    ]
    outside = [
        full(NAT),
        by_length(),
        from_function(ones, name="fn-ones"),
        _short_chain(u),
    ]
    return layered + outside, member


# --- registries -----------------------------------------------------------------

def builtin_registry(u: Universe, set_name: str,
                     horizon: Horizon) -> list:
    """Certified approximations for a built-in set: the tiny hand programs
    that apply, plus two table-compiled partial deciders."""
    target = builtin_set(set_name)
    approxes = []
    if set_name == "empty":
        approxes.append(Approximation(REJECT_ALL, 1))
    if set_name == "all":
        approxes.append(Approximation(ACCEPT_ALL, 1))
    if set_name == "parity":
        approxes.append(Approximation(PARITY_ODD, 1))
    if set_name == "prefix1":
        approxes.append(Approximation(PREFIX_ONE, 1))
    approxes.append(decider_for(target, u, within=lambda x: len(x) <= 3))
    approxes.append(decider_for(target, u, within=lambda x: len(x) <= 5))
    registry = [make_certificate(a, target, u) for a in approxes]
    bad = [c for c in registry if not c.verified]
    if bad:
        raise ValueError(f"could not certify a member for {set_name}")
    return registry
