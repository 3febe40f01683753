"""Reference sets, slice families, cores, and slice transformations.

A DecidedSet is a trusted hand-written oracle, kept strictly apart from the
enumerated machines it is used to judge.  A SliceFamily is a finite stand-in
for "all polynomial approximations" of a set: every member is validated
against the oracle before the family is used in a probe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Tuple

from .config import Horizon
from .machines import (
    Approximation,
    NotTotalOnUniverse,
    Outcome,
    RunResult,
    VirtualApproximation,
    domain,
    is_approximation_for,
    run,
)
from .universe import (
    Universe,
    nat_to_str,
    pair_bits,
    split_bits,
    str_to_nat,
)
from .verdict import HorizonVerdict, fails, holds


@dataclass(frozen=True)
class DecidedSet:
    """Named total oracle over the universe."""

    name: str
    decide: Callable[[str], bool] = field(compare=False)

    def __repr__(self):
        return f"set:{self.name}"

    def members(self, u: Universe) -> frozenset:
        return frozenset(x for x in u if self.decide(x))


EMPTY = DecidedSet("empty", lambda x: False)
ALL = DecidedSet("all", lambda x: True)
PARITY = DecidedSet("parity", lambda x: x.count("1") % 2 == 1)
MAJORITY = DecidedSet("majority", lambda x: 2 * x.count("1") > len(x))
PREFIX1 = DecidedSet("prefix1", lambda x: x[0] == "1")


@dataclass(frozen=True)
class SliceFamily:
    """Validated approximations standing in for an enumeration of slices."""

    target: DecidedSet
    members: Tuple

    def __len__(self):
        return len(self.members)

    def domains(self, u: Universe) -> list:
        return [domain(m, u) for m in self.members]


class DomainMismatch(Exception):
    def __init__(self, x: str):
        super().__init__(f"one side decides {x!r}, the other does not")
        self.x = x


def make_family(target: DecidedSet, members: Iterable, u: Universe,
                horizon: Horizon) -> SliceFamily:
    """Validate each member before admitting it; raises on a bad member."""
    checked = []
    for m in members:
        v = is_approximation_for(m, target, u, horizon)
        if not v.is_holds:
            raise ValueError(f"family member disagrees with {target.name} on"
                             f" {v.witness!r}")
        checked.append(m)
    return SliceFamily(target, tuple(checked))


def is_slice_for(approx, target: DecidedSet, u: Universe,
                 horizon: Horizon) -> HorizonVerdict:
    """An approximation's domain is a slice exactly when its answers agree
    with the target on all of u."""
    return is_approximation_for(approx, target, u, horizon)


def is_core_for(candidate: Iterable, family: SliceFamily, u: Universe,
                horizon: Horizon,
                threshold: Optional[int] = None) -> HorizonVerdict:
    """Core probe: the candidate meets every family slice in fewer than
    threshold strings."""
    t = horizon.threshold if threshold is None else threshold
    cset = frozenset(candidate)
    if not cset <= frozenset(u):
        raise ValueError("candidate core must lie inside the universe")
    for m in family.members:
        inter = cset & domain(m, u)
        if len(inter) >= t:
            return fails((m.describe(), sorted(inter)[:t]), horizon,
                         note="slice intersection reaches threshold")
    return holds(horizon)


def maximal_slice_probe(approx, target: DecidedSet, family: SliceFamily,
                        u: Universe, horizon: Horizon,
                        threshold: Optional[int] = None) -> HorizonVerdict:
    """Fails when some family slice extends the domain by >= threshold
    strings; holds means maximal at this horizon, nothing more."""
    t = horizon.threshold if threshold is None else threshold
    base = is_slice_for(approx, target, u, horizon)
    if not base.is_holds:
        raise ValueError("probe precondition: not a slice for the target")
    dom = domain(approx, u)
    for m in family.members:
        extra = domain(m, u) - dom
        if len(extra) >= t:
            return fails(m.describe(), horizon,
                         note=f"extended by {len(extra)} >= {t} strings")
    return holds(horizon)


def core_complement_duality(approx, target: DecidedSet, family: SliceFamily,
                            u: Universe, horizon: Horizon,
                            threshold: Optional[int] = None) -> HorizonVerdict:
    """Complement of a horizon-maximal slice must probe as a core."""
    probe = maximal_slice_probe(approx, target, family, u, horizon, threshold)
    if not probe.is_holds:
        raise ValueError("probe precondition: slice not maximal at horizon")
    complement = frozenset(u) - domain(approx, u)
    return is_core_for(complement, family, u, horizon, threshold)


def transform_symdiff(approx, xor_set_approx, u: Universe):
    """Turn a slice for A into a slice (same domain) for the symmetric
    difference of A with a set decided by a total program.

    xor_set_approx must give 0/1 on all of u within its own budget.
    Applying the transform twice with the same set restores the original
    answers pointwise.
    """
    for x in u:
        if not xor_set_approx.outcome(x).outcome.is_decision:
            raise NotTotalOnUniverse(x)

    def decide(x):
        res = approx.outcome(x)
        if not res.outcome.is_decision:
            return None
        flip = xor_set_approx.outcome(x).outcome.bit
        return res.outcome.bit ^ flip

    exponent = max(approx.exponent, xor_set_approx.exponent)
    return VirtualApproximation(
        decide, exponent,
        scale=approx.scale + xor_set_approx.scale,
        name=f"symdiff({approx.describe()})",
    )


def xor_combine(approx_a, approx_b, u: Universe):
    """Exclusive disjunction of two approximations over a common domain."""
    for x in u:
        da = approx_a.outcome(x).outcome.is_decision
        db = approx_b.outcome(x).outcome.is_decision
        if da != db:
            raise DomainMismatch(x)

    def decide(x):
        ra = approx_a.outcome(x)
        if not ra.outcome.is_decision:
            return None
        rb = approx_b.outcome(x)
        return ra.outcome.bit ^ rb.outcome.bit

    return VirtualApproximation(
        decide,
        max(approx_a.exponent, approx_b.exponent),
        scale=approx_a.scale + approx_b.scale,
        name="xor",
    )


# --- cylinders and length-increasing reductions ----------------------------

def encode_cylinder_point(x: str, y: int) -> str:
    """Pair a string with a natural, self-delimitingly."""
    return pair_bits(x, format(y, "b"))


def decode_cylinder_point(z: str) -> Optional[Tuple[str, int]]:
    parts = split_bits(z)
    if parts is None:
        return None
    x, ybits = parts
    if ybits != "0" and ybits[0] == "0":
        return None  # non-canonical numeral
    return x, int(ybits, 2)


@dataclass(frozen=True)
class Reduction:
    """Membership-preserving, strictly length-increasing self-map."""

    name: str
    apply: Callable[[str], str] = field(compare=False)
    length_factor: int = 3

    def orbit(self, x: str, u: Universe):
        """x, f(x), f(f(x)), ... while still inside the universe."""
        z = x
        while z in u:
            yield z
            z = self.apply(z)


def lli_cylinder(base: DecidedSet) -> Tuple[DecidedSet, Reduction]:
    """Cylindrify a set and return the doubling reduction on it.

    The cylinder holds every pairing of a member with a natural; doubling
    the numeral appends one bit, so the reduction grows every valid point
    by exactly one symbol.  Strings that are not pair encodings are mapped
    to longer non-encodings, keeping the map total and membership
    preserving on all strings.
    """
    def decide(z: str) -> bool:
        parsed = decode_cylinder_point(z)
        return parsed is not None and base.decide(parsed[0])

    cyl = DecidedSet(f"cylinder({base.name})", decide)

    def apply(z: str) -> str:
        parsed = decode_cylinder_point(z)
        if parsed is None:
            return "10" + z  # stays unparseable: "10" is no length prefix
        x, y = parsed
        return encode_cylinder_point(x, 2 * y if y >= 1 else 2)

    return cyl, Reduction(f"double-on-{cyl.name}", apply)


def extend_slice_via_reduction(slice_set: Iterable, reduction: Reduction,
                               target: DecidedSet, u: Universe,
                               spot_checks: int = 64):
    """The disjoint forward extension {x : x not in S and f(x) in S}.

    Membership preservation of the reduction is spot-checked on a prefix of
    the universe.  Returns the extension set and an orbit generator.
    """
    s = frozenset(slice_set)
    for x in list(u)[:spot_checks]:
        if target.decide(x) != target.decide(reduction.apply(x)):
            raise ValueError(f"reduction not membership-preserving at {x!r}")
    extension = frozenset(
        x for x in u if x not in s and reduction.apply(x) in s
    )
    return extension, lambda x: reduction.orbit(x, u)
