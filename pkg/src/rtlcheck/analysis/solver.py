"""
Workset fixpoint engine and inductiveness checker.

The engine is an untrusted oracle: its result is meant to be re-checked by
``check_inductive``, which only needs the order and the transfer function of
the domain and accepts invariants coming from anywhere.
"""

import heapq
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Generic, Protocol, TypeVar

from rtlcheck.ir.cfg import reverse_postorder, widening_points as find_widening_points
from rtlcheck.ir.function import Function
from rtlcheck.ir.instructions import Instr
from rtlcheck.structures.ptrie import PTrie

logger = logging.getLogger(__name__)

S = TypeVar("S")


class Domain(Protocol[S]):
    def bottom(self) -> S: ...

    def is_bottom(self, s: S) -> bool: ...

    def entry_state(self) -> S: ...

    def transfer(self, instr: Instr, s: S) -> list[tuple[int, S]]: ...

    def join(self, s1: S, s2: S) -> S: ...

    def widen(self, old: S, new: S) -> S: ...

    def leq(self, s1: S, s2: S) -> bool: ...


@dataclass(frozen=True)
class Invariant(Generic[S]):
    """
    An abstract state per location.

    Attributes
    ----------
    states : PTrie[S]
        location -> state
    picks : int
        number of workset picks that produced it, 0 when loaded from a file
    """

    states: PTrie[S]
    picks: int = 0

    def get(self, loc: int) -> S | None:
        return self.states.get(loc)

    def bindings(self) -> list[tuple[int, S]]:
        return self.states.bindings()

    @classmethod
    def of(cls, states: dict[int, S]) -> "Invariant[S]":
        return cls(PTrie.from_bindings(sorted(states.items())))

    def with_state(self, loc: int, state: S) -> "Invariant[S]":
        return Invariant(self.states.set(loc, state), self.picks)


class FailureReason(Enum):
    OUT_OF_FUEL = "out of fuel"


@dataclass(frozen=True)
class Failure:
    reason: FailureReason
    picks: int

    def __str__(self) -> str:
        return f"{self.reason.value} after {self.picks} picks"


def kildall(
    f: Function,
    domain: Domain[S],
    widening_points: set[int] | None = None,
    fuel: int | None = None,
    trace: list[int] | None = None,
) -> Invariant[S] | Failure:
    """
    Compute an invariant with a workset algorithm.

    The workset is a max-heap over locations; on a renumbered function the
    maximal location is the first one in reverse postorder.

    Parameters
    ----------
    f : Function
        a renumbered function
    domain : Domain
        lattice operations and transfer function
    widening_points : set[int], optional
        locations where the widening replaces the join, by default the
        back-edge targets of f
    fuel : int, optional
        maximal number of picks, by default 50 times the number of locations
    trace : list[int], optional
        if given, every picked location is appended to it

    Returns
    -------
    Invariant | Failure
        the invariant, or Failure(OUT_OF_FUEL) when the fuel runs out
    """
    if widening_points is None:
        widening_points = find_widening_points(f)
    if fuel is None:
        fuel = 50 * len(f)

    bottom = domain.bottom()
    states: PTrie[S] = PTrie.from_bindings((loc, bottom) for loc in f.locations)
    states = states.set(f.entry, domain.entry_state())
    heap = [-f.entry]
    pending = {f.entry}
    picks = 0

    logger.debug(f"solving {f.name}: {len(f)} locations, fuel {fuel}")
    while heap:
        if picks >= fuel:
            logger.warning(f"function {f.name}: out of fuel after {picks} picks")
            return Failure(FailureReason.OUT_OF_FUEL, picks)
        p = -heapq.heappop(heap)
        pending.discard(p)
        picks += 1
        if trace is not None:
            trace.append(p)

        for succ, produced in domain.transfer(f.instr(p), states.get(p)):
            current = states.get(succ)
            if domain.leq(produced, current):
                continue
            updated = domain.join(current, produced)
            if succ in widening_points:
                updated = domain.widen(current, updated)
            states = states.set(succ, updated)
            if succ not in pending:
                pending.add(succ)
                heapq.heappush(heap, -succ)

    logger.debug(f"solved {f.name} in {picks} picks")
    return Invariant(states, picks)


class Reason(Enum):
    ENTRY = "entry state not included"
    NOT_INDUCTIVE = "not inductive"
    MISSING = "missing"
    UNKNOWN_FACT = "unknown fact"
    BAD_TABLE = "inconsistent fact table"


@dataclass(frozen=True)
class Ok:
    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class CounterExample(Generic[S]):
    """
    The first violation found by a checker.

    ``source`` is None for a violation of the entry condition; ``produced`` is
    the state the transfer function sends along the edge and ``claimed`` the
    state the invariant holds at ``target``.
    """

    reason: Reason
    source: int | None
    target: int
    produced: S | None = None
    claimed: S | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return False

    @property
    def edge(self) -> tuple[int | None, int]:
        return (self.source, self.target)

    def __str__(self) -> str:
        where = (
            f"at entry {self.target}"
            if self.source is None
            else f"on edge {self.source} -> {self.target}"
        )
        text = f"{self.reason.value} {where}"
        if self.produced is not None or self.claimed is not None:
            text += f": produced {self.produced!r}, claimed {self.claimed!r}"
        if self.detail:
            text += f" ({self.detail})"
        return text


CheckResult = Ok | CounterExample


def check_inductive(
    f: Function, inv: Invariant[S], entry_state: S, domain: Domain[S]
) -> CheckResult:
    """
    Check that an invariant contains the entry state and is closed under
    every transition.

    Only ``leq`` and ``transfer`` of the domain are used. Locations are
    visited in reverse postorder and the first violated edge is reported.

    Parameters
    ----------
    f : Function
        the function
    inv : Invariant
        the candidate invariant, from any source
    entry_state : S
        state the invariant must contain at the entry
    domain : Domain
        order and transfer function

    Returns
    -------
    CheckResult
        Ok, or the CounterExample of the first violation
    """
    claimed_entry = inv.get(f.entry)
    if claimed_entry is None:
        return CounterExample(Reason.MISSING, None, f.entry)
    if not domain.leq(entry_state, claimed_entry):
        return CounterExample(Reason.ENTRY, None, f.entry, entry_state, claimed_entry)

    for p in reverse_postorder(f):
        state = inv.get(p)
        if state is None:
            return CounterExample(Reason.MISSING, None, p)
        if domain.is_bottom(state):
            continue
        for succ, produced in domain.transfer(f.instr(p), state):
            claimed = inv.get(succ)
            if claimed is None:
                return CounterExample(Reason.MISSING, p, succ, produced)
            if not domain.leq(produced, claimed):
                counter = CounterExample(Reason.NOT_INDUCTIVE, p, succ, produced, claimed)
                logger.info(f"function {f.name}: {counter}")
                return counter
    return Ok()


def top_invariant(f: Function, top: S) -> Invariant[S]:
    """The invariant holding the top state everywhere, always inductive"""
    return Invariant(PTrie.from_bindings((loc, top) for loc in f.locations))
