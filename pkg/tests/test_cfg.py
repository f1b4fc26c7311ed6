import logging
import random

from hypothesis import given
from hypothesis import strategies as st

from rtlcheck.ir.cfg import (
    back_edges,
    breaks_all_cycles,
    is_acyclic,
    is_renumbered,
    predecessors,
    renumber,
    reverse_postorder,
    widening_points,
)
from rtlcheck.ir.generate import random_function
from rtlcheck.ir.parser import parse
from tests.conftest import open_program


def test_reverse_postorder_true_successor_first():
    f = parse(
        """func d(r1) entry 1 {
          1: if lt r1 r1 -> 2, 3
          2: nop -> 4
          3: nop -> 4
          4: return r1 }"""
    )
    assert reverse_postorder(f) == [1, 2, 3, 4]
    assert not is_renumbered(f)
    g = renumber(f)
    assert is_renumbered(g)
    assert g.entry == 4
    assert g.instr(4).successors() == (3, 2)


def test_loop_structure(loop_function):
    assert is_renumbered(loop_function)
    assert back_edges(loop_function) == [(2, 3)]
    assert widening_points(loop_function) == {3}
    preds = predecessors(loop_function)
    assert sorted(preds[3]) == [2, 4]
    assert preds[1] == [3]
    assert 6 not in preds


def test_two_loops_are_renumbered(two_loops):
    assert is_renumbered(two_loops)
    assert widening_points(two_loops) == {3, 6}


def test_renumber_drops_unreachable(caplog):
    f = parse(
        """func u(r1) entry 3 {
          3: nop -> 1
          2: nop -> 1
          1: return r1 }"""
    )
    with caplog.at_level(logging.WARNING):
        g = renumber(f)
    assert g.locations == [1, 2]
    assert g.instr(2).successors() == (1,)
    assert "dropping 1 unreachable location(s)" in caplog.text


def test_renumber_multi(path_tests):
    second = parse(open_program(path_tests, "multi.ir").split("\n\n")[1])
    assert not is_renumbered(second)
    g = renumber(second)
    assert g.entry == 2
    assert g.instr(1).successors() == ()
    assert g.params == second.params


def test_is_acyclic():
    assert is_acyclic([1, 2, 3], [(3, 2), (2, 1), (3, 1)])
    assert not is_acyclic([1, 2, 3], [(3, 2), (2, 3)])
    assert is_acyclic([], [])


def test_breaks_all_cycles(loop_function):
    assert breaks_all_cycles(loop_function, {3})
    assert breaks_all_cycles(loop_function, {2})
    assert not breaks_all_cycles(loop_function, set())


@given(st.integers(min_value=0, max_value=2**32), st.integers(min_value=1, max_value=30))
def test_random_functions_widening_points(seed, nb_locations):
    f = random_function(random.Random(seed), nb_locations=nb_locations)
    assert is_renumbered(f)
    assert f.entry == len(f)
    assert reverse_postorder(f)[0] == f.entry
    assert breaks_all_cycles(f, widening_points(f))
    assert renumber(f) == f
