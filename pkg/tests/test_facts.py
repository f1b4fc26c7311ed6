import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from rtlcheck.analysis.facts import (
    UNREACHED,
    Fact,
    FactDomain,
    FactState,
    FactTable,
    apply_cse,
    fact_check,
    fact_kildall,
)
from rtlcheck.analysis.solver import Failure, Ok, Reason
from rtlcheck.errors import UncheckedInvariantError
from rtlcheck.ir.generate import random_function
from rtlcheck.ir.instructions import BinOp, Const, Move, Op
from rtlcheck.ir.interpreter import interpret


def test_table_numbering(sets):
    table = FactTable(sets)
    assert table.intern(3, BinOp.ADD, 1, 2) == 1
    assert table.intern(4, BinOp.MUL, 1, 3) == 2
    assert table.intern(3, BinOp.ADD, 1, 2) == 1
    assert list(table.kill_set(1)) == [1, 2]
    assert list(table.kill_set(3)) == [1, 2]
    assert list(table.kill_set(4)) == [2]
    assert list(table.kill_set(9)) == []
    frozen = table.rebuild()
    assert frozen.intern(5, BinOp.SUB, 1, 1) is None
    assert frozen.kill == table.kill


def test_duplicate_numbering(sets):
    fact = Fact(3, BinOp.ADD, 1, 2)
    with pytest.raises(ValueError, match="numbered both 1 and 2"):
        FactTable.from_index({1: fact, 2: fact}, sets)


def test_domain(sets):
    dom = FactDomain(FactTable(sets))
    a = FactState(sets.from_iterable([1, 2]))
    b = FactState(sets.from_iterable([2, 3]))
    assert dom.join(a, b) == FactState(sets.singleton(2))
    assert dom.join(UNREACHED, a) is a
    assert dom.leq(UNREACHED, a)
    assert not dom.leq(a, UNREACHED)
    assert dom.leq(a, dom.top())
    assert not dom.leq(dom.top(), a)
    assert dom.widen(a, b) is b
    assert repr(a) == "{1, 2}"
    assert repr(UNREACHED) == "Unreached"


def test_transfer_kills(sets):
    dom = FactDomain(FactTable(sets))
    [(_, s)] = dom.transfer(Op(3, BinOp.ADD, 1, 2, 5), dom.entry_state())
    assert list(s.facts) == [1]
    [(_, s2)] = dom.transfer(Const(1, 0, 4), s)
    assert list(s2.facts) == []
    [(_, s3)] = dom.transfer(Move(4, 1, 4), s)
    assert s3 == s
    [(_, s4)] = dom.transfer(Op(1, BinOp.ADD, 1, 2, 4), dom.entry_state())
    assert list(s4.facts) == []
    assert dom.transfer(Op(3, BinOp.ADD, 1, 2, 5), UNREACHED) == []


def test_two_adds(two_adds):
    inv, table = fact_kildall(two_adds)
    assert list(inv.get(2).facts) == [1]
    assert table.by_index[1] == Fact(3, BinOp.ADD, 1, 2)
    assert fact_check(two_adds, inv, table) == Ok()
    g = apply_cse(two_adds, inv, table)
    assert g.instr(2) == Move(4, 3, 1)
    assert g.instr(3) == two_adds.instr(3)
    for x, y in [(1, 2), (-4, 9)]:
        assert interpret(g, [x, y], fuel=10) == interpret(two_adds, [x, y], fuel=10)


def test_diamond_merge(cse_diamond):
    inv, table = fact_kildall(cse_diamond)
    assert list(inv.get(3).facts) == [1]
    g = apply_cse(cse_diamond, inv, table)
    assert g.instr(2) == Move(4, 3, 1)
    assert g.instr(5) == cse_diamond.instr(5)


def test_loop_facts(loop_function):
    inv, table = fact_kildall(loop_function)
    # r1 := add r1 r3 writes one of its operands
    assert len(table) == 0
    assert fact_check(loop_function, inv, table)


def test_forged_fact_is_rejected(two_adds):
    inv, table = fact_kildall(two_adds)
    forged = inv.with_state(3, FactState(table.sets.singleton(1)))
    verdict = fact_check(two_adds, forged, table)
    assert verdict.reason is Reason.ENTRY
    with pytest.raises(UncheckedInvariantError):
        apply_cse(two_adds, forged, table)


def test_unknown_fact_index(two_adds):
    inv, table = fact_kildall(two_adds)
    forged = inv.with_state(1, FactState(table.sets.from_iterable([1, 7])))
    verdict = fact_check(two_adds, forged, table)
    assert verdict.reason is Reason.UNKNOWN_FACT
    assert verdict.detail == "index 7"


def test_fact_out_of_fuel(loop_function):
    assert isinstance(fact_kildall(loop_function, fuel=2), Failure)


@given(st.integers(min_value=0, max_value=2**32))
def test_random_functions(seed):
    rng = random.Random(seed)
    f = random_function(rng, nb_locations=15, allow_mul=False)
    solved = fact_kildall(f)
    assume(not isinstance(solved, Failure))
    inv, table = solved
    assert fact_check(f, inv, table)

    def observe(loc, regs):
        for index in inv.get(loc).facts:
            fact = table.by_index[index]
            assert regs[fact.dst] == fact.op.apply(regs[fact.src1], regs[fact.src2])

    g = apply_cse(f, inv, table)
    for _ in range(3):
        inputs = [rng.randint(-20, 20), rng.randint(-20, 20)]
        outcome = interpret(f, inputs, fuel=300, observer=observe)
        assert interpret(g, inputs, fuel=300) == outcome
