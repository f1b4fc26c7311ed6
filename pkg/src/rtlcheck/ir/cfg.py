"""
Control-flow graph utilities: reverse postorder, renumbering, back edges and
widening points.
"""

import logging
from collections import defaultdict, deque
from typing import Iterable

from rtlcheck.ir.function import Function
from rtlcheck.ir.instructions import with_successors

logger = logging.getLogger(__name__)


def _dfs(f: Function) -> tuple[list[int], list[tuple[int, int]]]:
    """
    Depth-first search from the entry.

    Children are explored last successor first, so that in reverse postorder
    the true successor of a branch precedes its false successor.

    Returns
    -------
    tuple[list[int], list[tuple[int, int]]]
        the postorder and the back edges, in discovery order
    """
    postorder: list[int] = []
    back: list[tuple[int, int]] = []
    visited = {f.entry}
    on_stack = {f.entry}
    stack = [(f.entry, reversed(f.instr(f.entry).successors()))]
    while stack:
        node, children = stack[-1]
        child = next(children, None)
        if child is None:
            stack.pop()
            on_stack.discard(node)
            postorder.append(node)
        elif child in on_stack:
            back.append((node, child))
        elif child not in visited:
            visited.add(child)
            on_stack.add(child)
            stack.append((child, reversed(f.instr(child).successors())))
    return postorder, back


def reverse_postorder(f: Function) -> list[int]:
    """
    Reachable locations in reverse postorder, entry first.

    Examples
    --------
    >>> from rtlcheck.ir.parser import parse
    >>> f = parse('''func d(r1) entry 1 {
    ...   1: if lt r1 r1 -> 2, 3
    ...   2: nop -> 4
    ...   3: nop -> 4
    ...   4: return r1 }''')
    >>> reverse_postorder(f)
    [1, 2, 3, 4]
    """
    postorder, _ = _dfs(f)
    return postorder[::-1]


def back_edges(f: Function) -> list[tuple[int, int]]:
    """Edges (src, dst) whose target is on the DFS stack when they are followed"""
    _, back = _dfs(f)
    return back


def widening_points(f: Function) -> set[int]:
    """
    Targets of the back edges. Every cycle of the reachable graph goes
    through one of them.
    """
    return {dst for _, dst in back_edges(f)}


def edges(f: Function) -> list[tuple[int, int]]:
    return [(loc, succ) for loc, instr in f.code.bindings() for succ in instr.successors()]


def predecessors(f: Function) -> dict[int, list[int]]:
    preds: dict[int, list[int]] = defaultdict(list)
    for src, dst in edges(f):
        preds[dst].append(src)
    return dict(preds)


def is_acyclic(nodes: Iterable[int], graph_edges: Iterable[tuple[int, int]]) -> bool:
    """Kahn's algorithm: True iff the graph has no cycle."""
    nodes = set(nodes)
    succs: dict[int, list[int]] = defaultdict(list)
    indegree = dict.fromkeys(nodes, 0)
    for src, dst in graph_edges:
        succs[src].append(dst)
        indegree[dst] += 1
    ready = deque(n for n, d in indegree.items() if d == 0)
    seen = 0
    while ready:
        node = ready.popleft()
        seen += 1
        for succ in succs[node]:
            indegree[succ] -= 1
            if indegree[succ] == 0:
                ready.append(succ)
    return seen == len(nodes)


def breaks_all_cycles(f: Function, points: set[int]) -> bool:
    """
    True iff removing the edges entering ``points`` leaves the reachable
    graph acyclic.
    """
    reachable = set(reverse_postorder(f))
    residual = [
        (src, dst)
        for src, dst in edges(f)
        if src in reachable and dst in reachable and dst not in points
    ]
    return is_acyclic(reachable, residual)


def renumber(f: Function) -> Function:
    """
    Relabel locations so that the i-th location in reverse postorder gets
    location n - i, n being the number of reachable locations.

    The entry becomes the maximal location, so picking the maximal location of
    a workset picks the first one in reverse postorder. Unreachable locations
    are dropped.

    Parameters
    ----------
    f : Function
        the function to relabel

    Returns
    -------
    Function
        the relabelled function, with the same name and parameters
    """
    rpo = reverse_postorder(f)
    n = len(rpo)
    mapping = {loc: n - i for i, loc in enumerate(rpo)}
    dropped = len(f) - n
    if dropped:
        logger.warning(
            f"function {f.name}: dropping {dropped} unreachable location(s) while renumbering"
        )
    code = {mapping[loc]: with_successors(f.instr(loc), mapping) for loc in rpo}
    return Function.build(f.name, f.params, mapping[f.entry], code)


def is_renumbered(f: Function) -> bool:
    """True iff ``renumber`` would leave the function unchanged."""
    rpo = reverse_postorder(f)
    n = len(rpo)
    return len(f) == n and all(loc == n - i for i, loc in enumerate(rpo))
