"""Minimization and gap functions, horizon probes of the two orders,
imix detection, and lattice/filter law checks.

Probes never decide the true infinitary property; they hold, fail with a
witness, or report unresolved, always relative to the horizon they ran at.
A gap value is finite exactly when every quantified string resolves; an
InfinityWitness carries the first string that does not.
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional, Sequence

from .config import Horizon
from .params import Parameterization, meet as meet_op
from .universe import Universe
from .verdict import (
    UNRESOLVED,
    HorizonVerdict,
    InfinityWitness,
    fails,
    holds,
    unresolved,
)


def mu(e: Parameterization, x: str, max_len: int):
    """Least encoding length of a parameter value admitting x, or UNRESOLVED."""
    return e.mu(x, max_len)


def gap(e1: Parameterization, e2: Parameterization, n: int, u: Universe,
        max_len: int):
    """Worst e1-minimization over the strings that are n-cheap in e2.

    The maximum of the empty set is 0.  Returns an InfinityWitness when a
    quantified string does not resolve in e1 at the horizon; returns
    UNRESOLVED when n exceeds the horizon (cheapness can then not be
    decided truthfully).
    """
    if n > max_len:
        return UNRESOLVED
    best = 0
    for x in u:
        v2 = e2.mu(x, max_len)
        if v2 is UNRESOLVED or v2 > n:
            continue
        v1 = e1.mu(x, max_len)
        if v1 is UNRESOLVED:
            return InfinityWitness(x)
        if v1 > best:
            best = v1
    return best


def gap_table(e1: Parameterization, e2: Parameterization, u: Universe,
              horizon: Horizon, n_max: Optional[int] = None) -> list:
    """Rows (n, gap, witness) for n = 0..n_max."""
    top = horizon.H if n_max is None else min(n_max, horizon.H)
    rows = []
    for n in range(top + 1):
        g = gap(e1, e2, n, u, horizon.H)
        if isinstance(g, InfinityWitness):
            rows.append((n, "inf", g.x))
        else:
            rows.append((n, g, ""))
    return rows


def below_nu(e1: Parameterization, e2: Parameterization, u: Universe,
             horizon: Horizon) -> HorizonVerdict:
    """Nonuniform order at horizon: every gap value up to H is finite."""
    for n in range(horizon.H + 1):
        g = gap(e1, e2, n, u, horizon.H)
        if isinstance(g, InfinityWitness):
            return fails((n, g.x), horizon, note="gap infinite at horizon")
    return holds(horizon)


def below_uniform(e1: Parameterization, e2: Parameterization,
                  bound: Callable[[int], int], u: Universe,
                  horizon: Horizon) -> HorizonVerdict:
    """Uniform order against a supplied candidate bound on the gap."""
    for n in range(horizon.H + 1):
        g = gap(e1, e2, n, u, horizon.H)
        if isinstance(g, InfinityWitness):
            return fails((n, g.x), horizon, note="gap infinite at horizon")
        if g > bound(n):
            return fails((n, g), horizon, note="gap exceeds candidate bound")
    return holds(horizon)


def cardinality_bound(e: Parameterization, u: Universe,
                      horizon: Horizon) -> Callable[[int], int]:
    """Computable bound on gap(e, by_length): every slice of the by-length
    parameterization has known cardinality, so the strings it admits cheaply
    can be enumerated outright and the worst minimization taken."""
    table = {}
    for n in range(horizon.H + 1):
        best = 0
        for x in u:
            if len(format(len(x), "b")) <= n:
                v = e.mu(x, horizon.H)
                if v is not UNRESOLVED and v > best:
                    best = v
        table[n] = best
    return lambda n: table.get(n, table[horizon.H])


def has_imix(e: Parameterization, u: Universe, horizon: Horizon,
             threshold: Optional[int] = None) -> HorizonVerdict:
    """Threshold-many-extension probe.

    At the horizon "infinitely many infinite extensions" is read as: every
    slice is either already at the horizon-maximal slice (saturated; growth
    past it cannot be witnessed inside u) or extendable by at least
    threshold strings, and at least one slice is genuinely extendable.
    A parameterization whose slices are all equal fails outright.
    """
    t = horizon.threshold if threshold is None else threshold
    if t < 1:
        raise ValueError("threshold must be >= 1")
    top = e.coverage(u, horizon.H)
    if not top:
        return unresolved(horizon, note="no slice content at horizon")
    some_extension = False
    for k in e.space.elements_up_to(horizon.H):
        if len(e.space.encode(k)) > horizon.H:
            continue
        missing = 0
        for x in top:
            if not e.contains(x, k):
                missing += 1
                if missing >= t:
                    break
        if missing == 0:
            continue  # saturated at horizon
        if missing < t:
            return fails(k, horizon,
                         note=f"slice extendable by only {missing} < {t}")
        some_extension = True
    if not some_extension:
        return fails("all-slices-equal", horizon,
                     note="every slice equals the horizon-maximal slice")
    return holds(horizon)


def check_glb(e1: Parameterization, e2: Parameterization,
              family: Sequence[Parameterization], u: Universe,
              horizon: Horizon) -> HorizonVerdict:
    """meet(e1,e2) is below both, and beats every family lower bound."""
    m = meet_op(e1, e2)
    if not below_nu(m, e1, u, horizon).is_holds:
        return fails((m.name, e1.name), horizon, note="meet not below left")
    if not below_nu(m, e2, u, horizon).is_holds:
        return fails((m.name, e2.name), horizon, note="meet not below right")
    for g in family:
        if (below_nu(g, e1, u, horizon).is_holds
                and below_nu(g, e2, u, horizon).is_holds
                and not below_nu(g, m, u, horizon).is_holds):
            return fails(g.name, horizon,
                         note="family lower bound not below the meet")
    return holds(horizon)


def check_lub(e1: Parameterization, e2: Parameterization,
              family: Sequence[Parameterization], u: Universe,
              horizon: Horizon) -> HorizonVerdict:
    """Dual of check_glb for the conjunctive join."""
    from .params import join as join_op

    j = join_op(e1, e2)
    if not below_nu(e1, j, u, horizon).is_holds:
        return fails((e1.name, j.name), horizon, note="left not below join")
    if not below_nu(e2, j, u, horizon).is_holds:
        return fails((e2.name, j.name), horizon, note="right not below join")
    for g in family:
        if (below_nu(e1, g, u, horizon).is_holds
                and below_nu(e2, g, u, horizon).is_holds
                and not below_nu(j, g, u, horizon).is_holds):
            return fails(g.name, horizon,
                         note="join not below a family upper bound")
    return holds(horizon)


def check_filter(F: Sequence[Parameterization], L: Sequence[Parameterization],
                 member: Callable[[Parameterization], bool], u: Universe,
                 horizon: Horizon) -> HorizonVerdict:
    """Filter axioms for F = {e in L : member(e)} at horizon.

    Nonempty; up-closed along below_nu within L; closed under meets.  The
    membership predicate is the caller's (for instance, slicewise
    decidability against a validated approximation family).
    """
    fset = [e for e in F if member(e)]
    if len(fset) != len(F):
        bad = next(e for e in F if not member(e))
        return fails(bad.name, horizon, note="F contains a non-member")
    if not fset:
        return fails("empty", horizon, note="filter is empty")
    for e in fset:
        for e2 in L:
            if below_nu(e, e2, u, horizon).is_holds and not member(e2):
                return fails((e.name, e2.name), horizon,
                             note="not up-closed at horizon")
    for i, a in enumerate(fset):
        for b in fset[i:]:
            if not member(meet_op(a, b)):
                return fails((a.name, b.name), horizon,
                             note="meet escapes the filter")
    return holds(horizon)
