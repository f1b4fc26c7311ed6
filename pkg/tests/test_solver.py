from rtlcheck.analysis.interval import POS_INF, AbsState, Interval, IntervalDomain
from rtlcheck.analysis.solver import (
    CounterExample,
    Failure,
    FailureReason,
    Invariant,
    Ok,
    Reason,
    check_inductive,
    kildall,
    top_invariant,
)
from rtlcheck.ir.cfg import widening_points


def test_out_of_fuel(loop_function, caplog):
    result = kildall(loop_function, IntervalDomain(), fuel=3)
    assert result == Failure(FailureReason.OUT_OF_FUEL, 3)
    assert str(result) == "out of fuel after 3 picks"
    assert "out of fuel" in caplog.text


def test_picks_follow_the_max_heap(two_loops):
    trace = []
    inv = kildall(two_loops, IntervalDomain(), trace=trace)
    assert isinstance(inv, Invariant)
    assert inv.picks == len(trace)
    assert trace[0] == two_loops.entry
    last_inner = max(i for i, loc in enumerate(trace) if loc == 5)
    first_outer = min(i for i, loc in enumerate(trace) if loc == 2)
    assert last_inner < first_outer


def test_widening_points_default(loop_function):
    default = kildall(loop_function, IntervalDomain())
    explicit = kildall(loop_function, IntervalDomain(), widening_points=widening_points(loop_function))
    assert default.states == explicit.states


def test_bounded_loop_converges_without_widening(loop_function):
    inv = kildall(loop_function, IntervalDomain(), widening_points=set())
    assert inv.get(3).get(1) == Interval(0, 10)
    assert inv.get(1).get(1) == Interval(10, 10)


def test_shrunk_loop_head_is_rejected(loop_function):
    dom = IntervalDomain()
    inv = kildall(loop_function, dom)
    head = inv.get(3)
    shrunk = inv.with_state(3, head.assign(1, Interval(0, 5)))
    verdict = check_inductive(loop_function, shrunk, dom.entry_state(), dom)
    assert not verdict
    assert verdict.reason is Reason.NOT_INDUCTIVE
    assert verdict.edge == (2, 3)
    assert verdict.produced.get(1) == Interval(1, 10)
    assert verdict.claimed.get(1) == Interval(0, 5)
    assert str(verdict).startswith("not inductive on edge 2 -> 3: produced")


def test_entry_not_included(running_example, running_entry):
    dom = IntervalDomain(running_entry)
    claimed = AbsState.of({1: Interval(0, 0)})
    inv = Invariant.of({3: claimed, 2: dom.top(), 1: dom.top()})
    verdict = check_inductive(running_example, inv, running_entry, dom)
    assert verdict == CounterExample(Reason.ENTRY, None, 3, running_entry, claimed)
    assert str(verdict).startswith("entry state not included at entry 3")


def test_missing_location(running_example):
    dom = IntervalDomain()
    inv = Invariant.of({3: dom.top(), 2: dom.top()})
    verdict = check_inductive(running_example, inv, dom.entry_state(), dom)
    assert verdict.reason is Reason.MISSING
    assert verdict.edge == (2, 1)


def test_too_precise_exit_is_rejected(running_example, running_entry):
    dom = IntervalDomain(running_entry)
    inv = kildall(running_example, dom)
    exact = inv.with_state(1, inv.get(1).assign(3, Interval(0, 0)))
    verdict = check_inductive(running_example, exact, running_entry, dom)
    assert verdict.reason is Reason.NOT_INDUCTIVE
    assert verdict.edge == (2, 1)


def test_weakening_is_accepted(loop_function):
    dom = IntervalDomain()
    inv = kildall(loop_function, dom)
    weaker = inv.with_state(1, inv.get(1).assign(1, Interval(0, POS_INF)))
    assert check_inductive(loop_function, weaker, dom.entry_state(), dom) == Ok()


def test_top_invariant_is_inductive(two_loops):
    dom = IntervalDomain()
    inv = top_invariant(two_loops, dom.top())
    assert inv.picks == 0
    assert check_inductive(two_loops, inv, dom.entry_state(), dom)
