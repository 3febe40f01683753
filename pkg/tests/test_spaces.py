"""Parameter space laws and encodings."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from paramlat.config import DESK
from paramlat.spaces import (
    NAT,
    FiniteSpace,
    ProductSpace,
    check_space_laws,
    elements_by_length,
    encode_len,
)


def test_nat_encoding_examples():
    assert NAT.encode(0) == "0"
    assert encode_len(NAT, 0) == 1
    assert NAT.encode(3) == "11"
    assert encode_len(NAT, 3) == 2


def test_nat_encode_len_nondecreasing():
    lens = [encode_len(NAT, k) for k in range(512)]
    assert lens == sorted(lens)


def test_space_laws_hold_for_builtins():
    assert check_space_laws(NAT, 100, DESK).is_holds
    assert check_space_laws(ProductSpace(NAT, NAT), 50, DESK).is_holds


def test_space_laws_flag_broken_reflexivity():
    class Broken:
        chain = False
        min_encoding_len = 1
        min_element = 0

        def before(self, a, b):
            return False

        def encode(self, k):
            return format(k, "b")

        def join_hint(self, a, b):
            return max(a, b)

        def elements_up_to(self, max_len):
            return range(1 << min(max_len, 6))

    v = check_space_laws(Broken(), 20, DESK)
    assert v.is_fails


def test_product_encoding_is_injective_and_small_at_origin():
    s = ProductSpace(NAT, NAT)
    # documented format: binary numeral of the Cantor code of the dyadic
    # positions of the component encodings; the origin costs 3 bits.
    assert s.encode((0, 0)) == "100"
    assert encode_len(s, (0, 0)) == 3
    seen = {}
    for k in s.elements_up_to(10):
        e = s.encode(k)
        assert e not in seen
        seen[e] = k


def test_product_reflexive_transitive_exhaustive():
    s = ProductSpace(NAT, NAT)
    elems = [(a, b) for a in range(4) for b in range(4)]
    for k in elems:
        assert s.before(k, k)
    for a, b, c in itertools.product(elems, repeat=3):
        if s.before(a, b) and s.before(b, c):
            assert s.before(a, c)


def test_join_hint_is_upper_bound():
    s = ProductSpace(NAT, NAT)
    for a in [(0, 3), (2, 2), (5, 0)]:
        for b in [(1, 1), (4, 2)]:
            j = s.join_hint(a, b)
            assert s.before(a, j) and s.before(b, j)


def test_product_length_bounded_in_each_component():
    # fixing one coordinate, the pair length is computable from the other's
    s = ProductSpace(NAT, NAT)
    for k1 in range(16):
        l1 = encode_len(NAT, k1)
        total = encode_len(s, (k1, 3))
        assert total <= 2 * max(l1, encode_len(NAT, 3)) + 2


def test_elements_by_length_is_sorted_by_encoding():
    for space in (NAT, ProductSpace(NAT, NAT)):
        elems = elements_by_length(space, 8)
        lens = [len(space.encode(k)) for k in elems]
        assert lens == sorted(lens)
        assert all(l <= 8 for l in lens)


def test_finite_space_from_table():
    s = FiniteSpace(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    assert s.before("a", "d")  # transitive closure
    assert not s.before("b", "c")
    assert s.join_hint("b", "c") == "d"
    assert check_space_laws(s, 20, DESK).is_holds
    with pytest.raises(ValueError):
        FiniteSpace(["a", "b"], []).join_hint("a", "b")


def test_finite_space_rejects_empty():
    with pytest.raises(ValueError):
        FiniteSpace([], [])
