"""Parameterizations: up-set-fibered membership over (string, parameter).

A parameterization pairs a parameter space with a pure membership predicate
contains(x, k) whose fiber over every string is an up-set.  Fibers may be
empty within a horizon; minimization then reports the unresolved sentinel
rather than faking a value.

Minimization is driven by min_element: the encoding-cheapest parameter
value admitting a string.  Constructors that know their cheapest witness
supply it as a hint; chain spaces bisect (fibers are up-sets, hence
monotone along a chain); everything else scans elements in encoding-length
order.  Hints are cross-checked against plain enumeration in the tests.
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

from .machines import NotTotalOnUniverse, Program, run
from .spaces import NAT, ProductSpace, elements_by_length
from .universe import Universe
from .verdict import UNRESOLVED

MuValue = object  # int | UNRESOLVED


class SliceUnspecified(Exception):
    def __init__(self, index: int):
        super().__init__(f"slice {index} is unspecified")
        self.index = index


class Parameterization:
    def __init__(self, space, contains: Callable[[str, object], bool],
                 min_element_hint: Optional[Callable[[str], object]] = None,
                 slice_hint: Optional[Callable[[object, Universe], frozenset]] = None,
                 name: str = ""):
        self.space = space
        self._contains = contains
        self.min_element_hint = min_element_hint
        self._slice_hint = slice_hint
        self.name = name or "param"
        self._min_cache: dict = {}
        self._slice_cache: dict = {}

    def __repr__(self):
        return f"<{self.name}>"

    def contains(self, x: str, k) -> bool:
        return self._contains(x, k)

    def slice_at(self, k, u: Universe) -> frozenset:
        key = (self.space.encode(k), u.max_len)
        got = self._slice_cache.get(key)
        if got is None:
            if self._slice_hint is not None:
                got = frozenset(self._slice_hint(k, u))
            else:
                got = frozenset(x for x in u if self._contains(x, k))
            self._slice_cache[key] = got
        return got

    def min_element(self, x: str):
        """Encoding-cheapest parameter value admitting x, or UNRESOLVED.

        This is the global minimum, independent of any horizon; mu() then
        compares its encoding length against the horizon.
        """
        got = self._min_cache.get(x)
        if got is None:
            got = self._min_element_uncached(x)
            self._min_cache[x] = got
        return got

    def _min_element_uncached(self, x: str):
        if self.min_element_hint is not None:
            return self.min_element_hint(x)
        if getattr(self.space, "chain", False):
            return self._bisect_chain(x, _CHAIN_SEARCH_LEN)
        for k in elements_by_length(self.space, _FALLBACK_SEARCH_LEN):
            if self._contains(x, k):
                return k
        return UNRESOLVED

    def _bisect_chain(self, x: str, max_len: int):
        elems = self.space.elements_up_to(max_len)
        hi = len(elems)
        if hi == 0 or not self._contains(x, elems[hi - 1]):
            return UNRESOLVED
        lo = 0
        while lo < hi - 1:
            mid = (lo + hi - 1) // 2
            if self._contains(x, elems[mid]):
                hi = mid + 1
            else:
                lo = mid + 1
        return elems[hi - 1]

    def mu(self, x: str, max_len: int) -> MuValue:
        """Least encoding length of a parameter value admitting x, among
        encodings of length <= max_len."""
        k = self.min_element(x)
        if k is UNRESOLVED:
            return UNRESOLVED
        length = len(self.space.encode(k))
        return length if length <= max_len else UNRESOLVED

    def mu_by_enumeration(self, x: str, max_len: int) -> MuValue:
        """Hint-free reference path: scan elements in encoding-length order."""
        for k in elements_by_length(self.space, max_len):
            if self._contains(x, k):
                return len(self.space.encode(k))
        return UNRESOLVED

    def coverage(self, u: Universe, max_len: int) -> frozenset:
        """Strings of u whose minimization resolves at the horizon."""
        return frozenset(x for x in u if self.mu(x, max_len) is not UNRESOLVED)


# Chain minimization bisects over encodings this long; the fallback scan is
# kept shallow because only small hint-free spaces ever reach it.
_CHAIN_SEARCH_LEN = 24
_FALLBACK_SEARCH_LEN = 16


# --- constructors ----------------------------------------------------------

def full(space=NAT, name: str = "full") -> Parameterization:
    """Every string with every parameter value; the least element."""
    bottom = space.min_element
    return Parameterization(
        space,
        lambda x, k: True,
        min_element_hint=lambda x: bottom,
        slice_hint=lambda k, u: frozenset(u),
        name=name,
    )


def by_length(name: str = "bylength") -> Parameterization:
    """Admit x at every natural number >= |x|; the greatest element."""
    return Parameterization(
        NAT,
        lambda x, n: len(x) <= n,
        min_element_hint=lambda x: len(x),
        slice_hint=lambda n, u: frozenset(x for x in u if len(x) <= n),
        name=name,
    )


def from_function(f: Callable[[str], object], space=NAT,
                  name: str = "fn") -> Parameterization:
    """Parameterize by a function: admit x at every k after f(x).

    On a chain the cheapest admitting value is f(x) itself; on other spaces
    minimization falls back to enumeration.
    """
    hint = (lambda x: f(x)) if getattr(space, "chain", False) else None
    return Parameterization(
        space,
        lambda x, k: space.before(f(x), k),
        min_element_hint=hint,
        name=name,
    )


def meet(e1: Parameterization, e2: Parameterization,
         name: str = "") -> Parameterization:
    """Greatest lower bound candidate: disjunction over the product space."""
    space = ProductSpace(e1.space, e2.space)
    bot1 = e1.space.min_element
    bot2 = e2.space.min_element

    def contains(x, k):
        return e1.contains(x, k[0]) or e2.contains(x, k[1])

    def min_hint(x):
        # The product code is monotone in each component, so the cheapest
        # witness fixes one side's cheapest admitting value and the other
        # side's bottom; take the shorter of the two candidates.
        best = UNRESOLVED
        best_len = None
        k1 = e1.min_element(x)
        if k1 is not UNRESOLVED:
            cand = (k1, bot2)
            best, best_len = cand, len(space.encode(cand))
        k2 = e2.min_element(x)
        if k2 is not UNRESOLVED:
            cand = (bot1, k2)
            clen = len(space.encode(cand))
            if best_len is None or clen < best_len:
                best = cand
        return best

    def slice_hint(k, u):
        return e1.slice_at(k[0], u) | e2.slice_at(k[1], u)

    return Parameterization(space, contains, min_element_hint=min_hint,
                            slice_hint=slice_hint,
                            name=name or f"meet({e1.name},{e2.name})")


def join(e1: Parameterization, e2: Parameterization,
         name: str = "") -> Parameterization:
    """Least upper bound candidate: the conjunctive dual of meet."""
    space = ProductSpace(e1.space, e2.space)

    def contains(x, k):
        return e1.contains(x, k[0]) and e2.contains(x, k[1])

    def min_hint(x):
        k1 = e1.min_element(x)
        k2 = e2.min_element(x)
        if k1 is UNRESOLVED or k2 is UNRESOLVED:
            return UNRESOLVED
        return (k1, k2)

    def slice_hint(k, u):
        return e1.slice_at(k[0], u) & e2.slice_at(k[1], u)

    return Parameterization(space, contains, min_element_hint=min_hint,
                            slice_hint=slice_hint,
                            name=name or f"join({e1.name},{e2.name})")


def from_coverage(cover_index: Callable[[str], Optional[int]],
                  name: str = "slices") -> Parameterization:
    """Slice-union parameterization from a first-covering-index function.

    cover_index(x) is the least 1-based slice index whose union prefix
    contains x, or None when no prefix ever does.
    """
    cache: dict = {}

    def cover(x):
        if x not in cache:
            cache[x] = cover_index(x)
        return cache[x]

    def contains(x, k):
        c = cover(x)
        return c is not None and c <= k

    def min_hint(x):
        c = cover(x)
        return UNRESOLVED if c is None else c

    return Parameterization(NAT, contains, min_element_hint=min_hint, name=name)


def from_slices(slice_sets: Sequence, name: str = "slices") -> Parameterization:
    """Union-of-prefix parameterization over the naturals.

    slice(k) is the union of the first k sets; beyond the given sequence the
    union stays at its final value (the tail of the enumeration is empty).
    A None entry is an unspecified slice and is rejected up front.
    """
    sets = []
    for i, s in enumerate(slice_sets):
        if s is None:
            raise SliceUnspecified(i + 1)
        sets.append(frozenset(s))
    sets = tuple(sets)

    def cover_index(x):
        for i, s in enumerate(sets):
            if x in s:
                return i + 1
        return None

    e = from_coverage(cover_index, name=name)

    def slice_hint(k, u):
        out = set()
        for s in sets[: max(0, k)]:
            out |= s
        return frozenset(x for x in out if x in u)

    e._slice_hint = slice_hint
    return e


def from_runtime(program: Program, u: Universe, step_cap: int,
                 name: str = "") -> Parameterization:
    """Admit x at every step budget within which the program decides it.

    The program must halt with 0/1 on all of u within step_cap, otherwise
    NotTotalOnUniverse is raised for the first offender.
    """
    steps_needed = {}
    for x in u:
        res = run(program, x, step_cap)
        if not res.outcome.is_decision:
            raise NotTotalOnUniverse(x)
        steps_needed[x] = res.steps

    def lookup(x):
        if x not in steps_needed:
            res = run(program, x, step_cap)
            steps_needed[x] = res.steps if res.outcome.is_decision else None
        return steps_needed[x]

    def contains(x, k):
        s = lookup(x)
        return s is not None and s <= k

    def min_hint(x):
        s = lookup(x)
        return UNRESOLVED if s is None else s

    return Parameterization(NAT, contains, min_element_hint=min_hint,
                            name=name or "runtime")
