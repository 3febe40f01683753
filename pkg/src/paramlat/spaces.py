"""Parameter spaces: directed, encodable quasiordered sets.

A space exposes its order (before), an injective encoding into binary
strings, a directedness hint (join_hint), and horizon-bounded enumeration
in nondecreasing encoding length.  Spaces whose order is total with
monotone encoding lengths set ``chain`` so minimization can binary-search.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from .config import Horizon
from .universe import cantor_pair, str_to_nat
from .verdict import HorizonVerdict, fails, holds


class NatSpace:
    """Naturals with <=, encoded in plain binary (encode(0) = "0")."""

    chain = True
    min_encoding_len = 1
    min_element = 0

    def before(self, a: int, b: int) -> bool:
        return a <= b

    def encode(self, k: int) -> str:
        return format(k, "b")

    def join_hint(self, a: int, b: int) -> int:
        return max(a, b)

    def elements_up_to(self, max_len: int):
        return range(0, 1 << max_len)

    def top_at(self, max_len: int) -> int:
        return (1 << max_len) - 1

    def __repr__(self):
        return "nat"

    def __eq__(self, other):
        return isinstance(other, NatSpace)

    def __hash__(self):
        return hash("NatSpace")


NAT = NatSpace()


def _dyadic_index(space, k) -> int:
    """Position of an element's encoding in length-lex order of all strings."""
    return str_to_nat(space.encode(k))


class ProductSpace:
    """Componentwise order on pairs.

    A pair is encoded as the binary numeral of the Cantor code of its
    components' dyadic encoding positions.  The code is monotone in each
    component, so the encoding length of a pair grows like twice the longer
    component plus a constant, which keeps balanced pairs inside a desk
    horizon; a length bound computable from either component's length alone
    follows from the same monotonicity.
    """

    chain = False

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.min_element = (left.min_element, right.min_element)
        self.min_encoding_len = len(self.encode(self.min_element))

    def before(self, a, b) -> bool:
        return self.left.before(a[0], b[0]) and self.right.before(a[1], b[1])

    def encode(self, k) -> str:
        code = cantor_pair(_dyadic_index(self.left, k[0]),
                           _dyadic_index(self.right, k[1]))
        return format(code, "b")

    def join_hint(self, a, b):
        return (self.left.join_hint(a[0], b[0]), self.right.join_hint(a[1], b[1]))

    def elements_up_to(self, max_len: int):
        # Enumeration order of every space here is nondecreasing in the
        # dyadic index, so both loops can stop at the first overflow.
        cap = (1 << max_len) - 1
        min_right = _dyadic_index(self.right, self.right.min_element)
        out = []
        for k1 in self.left.elements_up_to(max_len):
            i1 = _dyadic_index(self.left, k1)
            if cantor_pair(i1, min_right) > cap:
                break
            for k2 in self.right.elements_up_to(max_len):
                i2 = _dyadic_index(self.right, k2)
                if cantor_pair(i1, i2) > cap:
                    break
                out.append((k1, k2))
        out.sort(key=lambda k: (len(self.encode(k)), self.encode(k)))
        return out

    def __repr__(self):
        return f"product({self.left!r},{self.right!r})"

    def __eq__(self, other):
        return (
            isinstance(other, ProductSpace)
            and self.left == other.left
            and self.right == other.right
        )

    def __hash__(self):
        return hash(("ProductSpace", self.left, self.right))


class FiniteSpace:
    """Finite space from an explicit table of labels and order pairs.

    Elements are encoded by their position (NatSpace encoding of the index),
    so enumeration order doubles as nondecreasing encoding length.  The
    given pairs are closed reflexively and transitively.
    """

    chain = False

    def __init__(self, labels: Sequence[str], pairs: Sequence[Tuple[str, str]]):
        if not labels:
            raise ValueError("a space must be nonempty")
        self.labels = tuple(labels)
        self.min_element = self.labels[0]
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        rel = {(a, a) for a in self.labels}
        rel.update((a, b) for a, b in pairs)
        changed = True
        while changed:
            changed = False
            for a, b in list(rel):
                for c, d in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        self._rel = frozenset(rel)
        self.min_encoding_len = 1

    def before(self, a: str, b: str) -> bool:
        return (a, b) in self._rel

    def encode(self, k: str) -> str:
        return format(self._index[k], "b")

    def join_hint(self, a: str, b: str) -> str:
        for c in self.labels:
            if self.before(a, c) and self.before(b, c):
                return c
        raise ValueError(f"no common upper bound for {a!r}, {b!r}: not directed")

    def elements_up_to(self, max_len: int):
        return [lab for i, lab in enumerate(self.labels) if len(format(i, "b")) <= max_len]

    def __repr__(self):
        return f"finite({','.join(self.labels)})"


def encode_len(space, k) -> int:
    return len(space.encode(k))


def elements_by_length(space, max_len: int) -> list:
    """Horizon elements sorted by (encoding length, encoding)."""
    elems = list(space.elements_up_to(max_len))
    elems.sort(key=lambda k: (len(space.encode(k)), space.encode(k)))
    return [k for k in elems if len(space.encode(k)) <= max_len]


def check_space_laws(space, sample: int, horizon: Horizon,
                     seed: int = 0) -> HorizonVerdict:
    """Reflexivity, transitivity on sampled triples, directedness of the
    join hints, and injective encoding, all over a horizon-bounded sample."""
    if sample < 3:
        raise ValueError("sample must be >= 3")
    elems = elements_by_length(space, horizon.H)
    if not elems:
        return fails("empty", horizon, note="no elements at horizon")
    rng = random.Random(seed)
    pool = elems if len(elems) <= sample else rng.sample(elems, sample)

    seen = {}
    for k in pool:
        e = space.encode(k)
        if e in seen and seen[e] != k:
            return fails((seen[e], k), horizon, note="encoding not injective")
        seen[e] = k
        if not space.before(k, k):
            return fails(k, horizon, note="reflexivity fails")

    for _ in range(sample):
        a, b, c = (rng.choice(pool) for _ in range(3))
        if space.before(a, b) and space.before(b, c) and not space.before(a, c):
            return fails((a, b, c), horizon, note="transitivity fails")

    for _ in range(sample):
        a, b = rng.choice(pool), rng.choice(pool)
        j = space.join_hint(a, b)
        if not (space.before(a, j) and space.before(b, j)):
            return fails((a, b, j), horizon, note="join hint not an upper bound")
    return holds(horizon)
