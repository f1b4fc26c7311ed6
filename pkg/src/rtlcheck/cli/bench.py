"""
Counter-based scaling measurements.

- join-scaling: one join at the merge of an if-then-else over v tracked
  registers, k of them written by the branches; sharing join versus naive join
- dag-scaling: validation of the squaring chain of length n; interned nodes
  versus the size of the unfolded tree
- set-scaling: union of two hash-consed sets of v members differing on k
  members, with and without identity shortcuts

Every figure is a counter, so the tables are deterministic.
"""

from dataclasses import dataclass
from typing import Sequence

from rtlcheck.analysis.interval import AbsState, IntervalDomain
from rtlcheck.analysis.solver import Failure, kildall
from rtlcheck.ir.cfg import predecessors
from rtlcheck.ir.generate import chain_block, diamond_function
from rtlcheck.structures.hset import SetArena
from rtlcheck.structures.ptrie import ShareStats
from rtlcheck.symexec.validator import validate

SCENARIOS = ("join-scaling", "dag-scaling", "set-scaling")


@dataclass(frozen=True)
class JoinRow:
    keys: int
    touched: int
    sharing_visited: int
    naive_visited: int
    sharing_allocated: int
    naive_allocated: int


def merge_states(nb_keys: int, touched: int) -> tuple[AbsState, AbsState]:
    """
    The two states flowing into the merge of ``diamond_function``, computed by
    the interval analysis.
    """
    f = diamond_function(nb_keys, touched)
    domain = IntervalDomain()
    inv = kildall(f, domain, fuel=4 * len(f))
    if isinstance(inv, Failure):
        raise RuntimeError(f"diamond of {nb_keys} keys: {inv}")
    incoming = []
    for pred in sorted(predecessors(f)[1]):
        for succ, state in domain.transfer(f.instr(pred), inv.get(pred)):
            if succ == 1:
                incoming.append(state)
    s1, s2 = incoming
    return s1, s2


def join_scaling(sizes: Sequence[int], touched: int) -> list[JoinRow]:
    rows = []
    for v in sizes:
        s1, s2 = merge_states(v, touched)
        sharing = IntervalDomain(stats=ShareStats())
        sharing.join(s1, s2)
        naive = IntervalDomain(stats=ShareStats(), shortcut=False)
        naive.join(s1, s2)
        rows.append(
            JoinRow(
                v,
                touched,
                sharing.stats.nodes_visited,
                naive.stats.nodes_visited,
                sharing.stats.nodes_allocated,
                naive.stats.nodes_allocated,
            )
        )
    return rows


@dataclass(frozen=True)
class DagRow:
    length: int
    nodes: int
    would_be_tree_size: int
    equivalent: bool


def dag_scaling(lengths: Sequence[int]) -> list[DagRow]:
    rows = []
    for n in lengths:
        block = chain_block(n)
        verdict = validate(block, block)
        rows.append(DagRow(n, verdict.dag.nodes, verdict.dag.would_be_tree_size, verdict.equivalent))
    return rows


@dataclass(frozen=True)
class SetRow:
    members: int
    touched: int
    shortcut_visited: int
    naive_visited: int
    shortcut_hits: int


def set_scaling(sizes: Sequence[int], touched: int) -> list[SetRow]:
    rows = []
    for v in sizes:
        sets = SetArena()
        base = sets.from_iterable(range(1, v + 1))
        s1 = sets.from_iterable(range(v + 1, v + 1 + touched))
        s1 = sets.union(base, s1)
        s2 = base
        for k in range(1, touched + 1):
            s2 = sets.remove(s2, k)

        sets.stats.reset()
        sets.union(s1, s2)
        shortcut_visited, hits = sets.stats.nodes_visited, sets.stats.shortcut_hits

        sets.stats.reset()
        sets.union(s1, s2, shortcut=False)
        rows.append(SetRow(v, touched, shortcut_visited, sets.stats.nodes_visited, hits))
    return rows


def growth(values: Sequence[int]) -> list[float]:
    """Ratio of each value to the previous one"""
    return [round(b / a, 3) if a else float("inf") for a, b in zip(values, values[1:])]
