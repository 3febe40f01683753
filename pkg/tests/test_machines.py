"""Interpreter determinism, budget accounting, enumeration, restriction."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paramlat.config import DESK
from paramlat.machines import (
    ACCEPT_ALL,
    DIVERGER,
    PARITY_ODD,
    PREFIX_ONE,
    REJECT_ALL,
    Approximation,
    Outcome,
    Program,
    assemble,
    decode_instructions,
    domain,
    is_approximation_for,
    program_from_hex,
    program_to_hex,
    restrict,
    run,
)
from paramlat.slices import EMPTY, PARITY
from paramlat.universe import Universe, nat_to_str

U6 = Universe(6)


def test_constant_machines():
    assert run(REJECT_ALL, "10101", 100) == (Outcome.REJECT, 1)
    assert run(ACCEPT_ALL, "0", 100) == (Outcome.ACCEPT, 1)


def test_diverger_runs_out_of_budget():
    res = run(DIVERGER, "1", 100)
    assert res.outcome is Outcome.OUT_OF_BUDGET
    assert res.steps == 100
    for x in U6:
        assert run(DIVERGER, x, 50).outcome is Outcome.OUT_OF_BUDGET


def test_parity_program_against_oracle():
    # reference: count the ones directly
    for x in U6:
        res = run(PARITY_ODD, x, 10**4)
        expected = Outcome.ACCEPT if x.count("1") % 2 == 1 else Outcome.REJECT
        assert res.outcome is expected, x


def test_parity_spec_example():
    res = run(PARITY_ODD, "101", 10**4)
    assert res.outcome is Outcome.REJECT  # two ones: even, not odd


def test_prefix_one_program():
    for x in U6:
        want = Outcome.ACCEPT if x[0] == "1" else Outcome.REJECT
        assert run(PREFIX_ONE, x, 100).outcome is want


codes = st.text(alphabet="01", min_size=1, max_size=40)


@given(codes, st.text(alphabet="01", min_size=1, max_size=8),
       st.integers(1, 200))
def test_run_deterministic_and_within_budget(code, x, budget):
    p = Program(code)
    r1 = run(p, x, budget)
    r2 = run(p, x, budget)
    assert r1 == r2
    assert r1.steps <= budget
    if r1.outcome is Outcome.OUT_OF_BUDGET:
        assert r1.steps == budget


@given(codes, st.text(alphabet="01", min_size=1, max_size=8),
       st.integers(1, 60))
def test_more_budget_preserves_decisions(code, x, budget):
    p = Program(code)
    r1 = run(p, x, budget)
    if r1.outcome.is_decision:
        r2 = run(p, x, budget * 3)
        assert r2.outcome is r1.outcome
        assert r2.steps == r1.steps


def test_effective_enumeration_roundtrip():
    for i in range(1, 2**12 + 1):
        assert Program.from_index(i).index == i


def test_budget_formula():
    a = restrict(Program("100"), 1)
    assert a.budget(8) == 16 * 8
    b = restrict(Program("100"), 3, scale=2)
    assert b.budget(4) == 2 * 4**3


def test_restrict_rejects_zero_exponent():
    with pytest.raises(ValueError):
        restrict(REJECT_ALL, 0)


def test_restriction_monotone_domains_first_64_programs():
    for i in range(1, 65):
        p = Program.from_index(i)
        d2 = domain(restrict(p, 2), U6)
        d3 = domain(restrict(p, 3), U6)
        assert d2 <= d3, i


def test_domains_of_constants():
    assert domain(restrict(REJECT_ALL, 1), U6) == frozenset(U6)
    assert domain(restrict(DIVERGER, 5), U6) == frozenset()


def test_is_approximation_for_constants():
    assert is_approximation_for(restrict(REJECT_ALL, 1), EMPTY, U6, DESK).is_holds
    v = is_approximation_for(restrict(ACCEPT_ALL, 1), EMPTY, U6, DESK)
    assert v.is_fails
    assert v.witness == "0"  # first universe string


def test_first_128_programs_judged_against_parity():
    # Derived by exhaustive simulation: every verdict must agree with a
    # direct agreement scan of the machine's answers.
    for i in range(1, 129):
        approx = restrict(Program.from_index(i), 2)
        verdict = is_approximation_for(approx, PARITY, U6, DESK)
        disagree = [
            x for x in U6
            if (r := approx.outcome(x)).outcome.is_decision
            and bool(r.outcome.bit) != PARITY.decide(x)
        ]
        assert verdict.is_holds == (not disagree), i
        if disagree:
            assert verdict.witness == disagree[0]


def test_assembler_roundtrip():
    prog = assemble([
        ("label", "top"),
        ("R",),
        ("JIB", "top"),
        ("ACC",),
    ])
    instrs = decode_instructions(prog.code)
    assert instrs == (("R", 0), ("JIB", 0), ("ACC", 0))


def test_greedy_decode_ignores_incomplete_tail():
    assert decode_instructions("10") == ()
    assert decode_instructions("100" + "11") == (("REJ", 0),)
    # an incomplete jump operand is dropped
    assert decode_instructions("110" + "0011") == ()


def test_hex_serialization_roundtrip():
    for p in (REJECT_ALL, PARITY_ODD, DIVERGER, Program("0001")):
        assert program_from_hex(program_to_hex(p)) == p
    assert program_to_hex(REJECT_ALL) == "3:4"
