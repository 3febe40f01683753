"""Universe substrate: bijections, pairings, enumeration order."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paramlat.universe import (
    Universe,
    cantor_pair,
    cantor_unpair,
    nat_to_str,
    pair_bits,
    pair_bits_len,
    pair_str,
    split_bits,
    str_to_nat,
    unpair_str,
)


def length_lex(max_len):
    """Independent oracle: the length-lex enumeration, built from scratch."""
    for n in range(1, max_len + 1):
        for bits in itertools.product("01", repeat=n):
            yield "".join(bits)


def test_dyadic_examples():
    assert str_to_nat("0") == 1
    assert str_to_nat("1") == 2
    # derived from the length-lex oracle: "00" is the third string
    oracle = list(length_lex(2))
    assert oracle.index("00") + 1 == 3
    assert str_to_nat("00") == 3


def test_dyadic_matches_enumeration_order():
    for pos, x in enumerate(length_lex(8), start=1):
        assert str_to_nat(x) == pos
        assert nat_to_str(pos) == x


def test_nat_to_str_rejects_zero():
    with pytest.raises(ValueError):
        nat_to_str(0)


def test_cantor_examples():
    assert cantor_pair(0, 0) == 0
    assert cantor_pair(1, 2) == (1 + 2) * (1 + 2 + 1) // 2 + 2 == 8


@given(st.integers(0, 1000), st.integers(0, 1000))
def test_cantor_roundtrip(a, b):
    assert cantor_unpair(cantor_pair(a, b)) == (a, b)


def test_cantor_surjective_on_prefix():
    seen = {cantor_pair(a, b) for a in range(50) for b in range(50)}
    assert set(range(50 * 49 // 2)) <= seen


@given(st.integers(0, 10**5), st.integers(0, 10**5))
def test_pair_str_roundtrip(a, b):
    if (a, b) == (0, 0):
        return
    assert unpair_str(pair_str(a, b)) == (a, b)


bitstrings = st.text(alphabet="01", min_size=1, max_size=12)


@given(bitstrings, bitstrings)
def test_pair_bits_roundtrip(a, b):
    s = pair_bits(a, b)
    assert split_bits(s) == (a, b)
    assert len(s) == pair_bits_len(len(a), len(b))


@given(st.text(alphabet="01", min_size=1, max_size=24))
def test_split_bits_total(s):
    out = split_bits(s)
    if out is not None:
        assert pair_bits(*out) == s


def test_universe_enumeration():
    assert list(Universe(1)) == ["0", "1"]
    assert list(Universe(2)) == ["0", "1", "00", "01", "10", "11"]
    u8 = Universe(8)
    strings = list(u8)
    assert len(strings) == 2**9 - 2 == 510
    assert u8.size == 510
    assert strings == list(length_lex(8))


def test_universe_membership():
    u = Universe(3)
    assert "010" in u
    assert "0101" not in u
    assert "" not in u
    assert "2" not in u


def test_dyadic_is_bijection_onto_universe_range():
    u = Universe(6)
    values = [str_to_nat(x) for x in u]
    assert values == list(range(1, u.size + 1))
