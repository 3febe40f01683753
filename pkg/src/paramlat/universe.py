"""Binary strings, the dyadic bijection, pairing functions, finite universes.

Strings are nonempty words over {0,1}, represented as plain Python str.
The dyadic bijection identifies a string with its 1-based position in the
length-then-lexicographic enumeration, which lets number-valued pairing
apply to string arguments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import isqrt
from typing import Iterator, Optional, Tuple


def check_bitstring(x: str) -> str:
    if not x or any(c not in "01" for c in x):
        raise ValueError(f"not a nonempty binary string: {x!r}")
    return x


def str_to_nat(x: str) -> int:
    """Position (starting at 1) of x in length-lexicographic order."""
    return int("1" + x, 2) - 1


def nat_to_str(n: int) -> str:
    """Inverse of str_to_nat, defined for n >= 1."""
    if n < 1:
        raise ValueError(f"no string has position {n}")
    return format(n + 1, "b")[1:]


def cantor_pair(a: int, b: int) -> int:
    return (a + b) * (a + b + 1) // 2 + b


def cantor_unpair(v: int) -> Tuple[int, int]:
    w = (isqrt(8 * v + 1) - 1) // 2
    b = v - w * (w + 1) // 2
    return w - b, b


def pair_str(a: int, b: int) -> str:
    """String carrying the Cantor code of (a, b); undefined only at (0, 0)."""
    return nat_to_str(cantor_pair(a, b))


def unpair_str(s: str) -> Tuple[int, int]:
    return cantor_unpair(str_to_nat(s))


# Self-delimiting pair of bit strings: the length of the first component is
# written in binary with every bit doubled, closed by "01", then the two
# components follow.  |pair| = |a| + |b| + 2*(bitlen(|a|) + 1).

def pair_bits(a: str, b: str) -> str:
    if not a or not b:
        raise ValueError("components must be nonempty")
    prefix = "".join(c + c for c in format(len(a), "b"))
    return prefix + "01" + a + b


def split_bits(s: str) -> Optional[Tuple[str, str]]:
    """Decode pair_bits; None when s is not a valid pair encoding."""
    bits = []
    i = 0
    while i + 2 <= len(s) and s[i : i + 2] in ("00", "11"):
        bits.append(s[i])
        i += 2
    if s[i : i + 2] != "01" or not bits or bits[0] != "1":
        return None
    i += 2
    length = int("".join(bits), 2)
    a = s[i : i + length]
    b = s[i + length :]
    if len(a) != length or not b:
        return None
    return a, b


def pair_bits_len(len_a: int, len_b: int) -> int:
    """Encoded length of a pair whose components have the given lengths."""
    return 2 * (len(format(len_a, "b")) + 1) + len_a + len_b


@lru_cache(maxsize=None)
def _strings_up_to(max_len: int) -> tuple:
    out = []
    for n in range(1, max_len + 1):
        for bits in itertools.product("01", repeat=n):
            out.append("".join(bits))
    return tuple(out)


@dataclass(frozen=True)
class Universe:
    """All binary strings of length 1..max_len, in length-lex order."""

    max_len: int

    def __post_init__(self):
        if self.max_len < 1:
            raise ValueError("max_len must be positive")

    @property
    def size(self) -> int:
        return 2 ** (self.max_len + 1) - 2

    def strings(self) -> tuple:
        return _strings_up_to(self.max_len)

    def __iter__(self) -> Iterator[str]:
        return iter(self.strings())

    def __contains__(self, x: str) -> bool:
        return (
            isinstance(x, str)
            and 1 <= len(x) <= self.max_len
            and all(c in "01" for c in x)
        )

    def __len__(self) -> int:
        return self.size
