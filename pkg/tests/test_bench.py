import pytest

from rtlcheck.analysis.interval import Interval
from rtlcheck.cli.bench import dag_scaling, growth, join_scaling, merge_states, set_scaling
from rtlcheck.structures.hset import SetArena
from rtlcheck.structures.ptrie import PTrie, ShareStats

pytestmark = pytest.mark.bench

SIZES = [1000, 2000, 4000, 8000]


def test_growth():
    assert growth([10, 20, 30]) == [2.0, 1.5]
    assert growth([0, 5]) == [float("inf")]


def test_merge_states_share_untouched_registers():
    s1, s2 = merge_states(50, 3)
    # predecessors in increasing order: the else branch comes first
    assert s1.get(2).lo == 2
    assert s2.get(2).lo == 1
    assert s1.get(40) == s2.get(40)


def test_join_scaling():
    rows = join_scaling(SIZES, touched=10)
    assert [r.keys for r in rows] == SIZES
    assert all(g <= 1.3 for g in growth([r.sharing_visited for r in rows]))
    assert all(g >= 1.9 for g in growth([r.naive_visited for r in rows]))
    assert all(r.sharing_visited < r.naive_visited for r in rows)


def test_dag_scaling():
    rows = dag_scaling([10, 20, 40])
    assert [r.nodes for r in rows] == [11, 21, 41]
    assert [r.would_be_tree_size for r in rows] == [2**11 - 1, 2**21 - 1, 2**41 - 1]
    assert all(r.equivalent for r in rows)


def test_set_scaling():
    rows = set_scaling(SIZES, touched=10)
    assert all(g <= 1.3 for g in growth([r.shortcut_visited for r in rows]))
    assert all(g >= 1.9 for g in growth([r.naive_visited for r in rows]))
    assert all(r.shortcut_hits > 0 for r in rows)


@pytest.mark.parametrize("size", SIZES)
def test_union_with_itself_visits_nothing(size):
    sets = SetArena()
    s = sets.from_iterable(range(1, size + 1))
    sets.stats.reset()
    assert sets.union(s, s) == s
    assert sets.stats.nodes_visited <= 1
    assert sets.stats.shortcut_hits == 1


@pytest.mark.parametrize("size", SIZES)
def test_leq_with_itself_visits_the_root_only(size):
    t = PTrie.from_bindings((k, Interval(0, k)) for k in range(1, size + 1))
    stats = ShareStats()
    assert PTrie.leq(lambda x, y: y.includes(x), t, t, stats=stats)
    assert stats.nodes_visited <= 1
    assert stats.shortcut_hits == 1
