"""
Dataflow facts ``dst = op src1 src2`` for global common subexpression
elimination.

Facts are numbered on the fly while the fixpoint is computed; a location holds
the set of fact indices known to hold there, and the join of two locations is
the intersection of their sets. Writing a register invalidates every fact
mentioning it, through the kill sets of the fact table.
"""

import logging
from dataclasses import dataclass

from rtlcheck.analysis.solver import (
    CheckResult,
    CounterExample,
    Failure,
    Invariant,
    Reason,
    check_inductive,
    kildall,
)
from rtlcheck.errors import UncheckedInvariantError
from rtlcheck.ir.function import Function
from rtlcheck.ir.instructions import BinOp, Branch, Const, Instr, Move, Nop, Op, Return
from rtlcheck.structures.hset import HSet, SetArena

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Fact:
    dst: int
    op: BinOp
    src1: int
    src2: int

    @property
    def registers(self) -> tuple[int, ...]:
        return (self.dst, self.src1, self.src2)

    def __str__(self) -> str:
        return f"r{self.dst} = {self.op.value} r{self.src1} r{self.src2}"


@dataclass(frozen=True)
class FactState:
    """Unreached when ``facts`` is None, otherwise the facts known to hold."""

    facts: HSet | None

    @property
    def is_unreached(self) -> bool:
        return self.facts is None

    def __repr__(self) -> str:
        if self.facts is None:
            return "Unreached"
        return "{" + ", ".join(str(i) for i in self.facts) + "}"


UNREACHED = FactState(None)


class FactTable:
    """
    Two-way numbering of facts, with the kill set of every register.

    Parameters
    ----------
    sets : SetArena
        arena of the fact sets, shared with the invariant
    frozen : bool, optional
        a frozen table never numbers new facts, by default False
    """

    def __init__(self, sets: SetArena, frozen: bool = False) -> None:
        self.sets = sets
        self.frozen = frozen
        self.by_index: dict[int, Fact] = {}
        self.by_fact: dict[Fact, int] = {}
        self.kill: dict[int, HSet] = {}

    def __len__(self) -> int:
        return len(self.by_index)

    def _register(self, index: int, fact: Fact) -> None:
        self.by_index[index] = fact
        self.by_fact[fact] = index
        for r in set(fact.registers):
            self.kill[r] = self.sets.add(self.kill.get(r, self.sets.empty()), index)

    def intern(self, dst: int, op: BinOp, src1: int, src2: int) -> int | None:
        """
        Index of a fact, numbering it if it is new

        Returns
        -------
        int | None
            the index, dense from 1 in first-encounter order; None for an
            unknown fact of a frozen table
        """
        fact = Fact(dst, op, src1, src2)
        index = self.by_fact.get(fact)
        if index is not None or self.frozen:
            return index
        index = len(self.by_index) + 1
        self._register(index, fact)
        return index

    def kill_set(self, r: int) -> HSet:
        return self.kill.get(r, self.sets.empty())

    @classmethod
    def from_index(
        cls, by_index: dict[int, Fact], sets: SetArena, frozen: bool = True
    ) -> "FactTable":
        """
        Rebuild the reverse map and the kill sets from the numbering alone

        Raises
        ------
        ValueError
            if two indices number the same fact
        """
        table = cls(sets, frozen=frozen)
        for index, fact in sorted(by_index.items()):
            if fact in table.by_fact:
                raise ValueError(
                    f"fact {fact} numbered both {table.by_fact[fact]} and {index}"
                )
            table._register(index, fact)
        return table

    def rebuild(self) -> "FactTable":
        return FactTable.from_index(self.by_index, self.sets)


class FactDomain:
    """
    Lattice operations and transfer function of the fact analysis.

    Unreached is the least state; Known(A) is below Known(B) when A contains
    B, so the join is the intersection.
    """

    def __init__(self, table: FactTable) -> None:
        self.table = table
        self.sets = table.sets

    def bottom(self) -> FactState:
        return UNREACHED

    def is_bottom(self, s: FactState) -> bool:
        return s.is_unreached

    def entry_state(self) -> FactState:
        return FactState(self.sets.empty())

    def top(self) -> FactState:
        return FactState(self.sets.empty())

    def join(self, s1: FactState, s2: FactState) -> FactState:
        if s1.facts is None:
            return s2
        if s2.facts is None:
            return s1
        return FactState(self.sets.inter(s1.facts, s2.facts))

    def widen(self, old: FactState, new: FactState) -> FactState:
        # sets only shrink along the iterations, the join terminates
        return new

    def leq(self, s1: FactState, s2: FactState) -> bool:
        if s1.facts is None:
            return True
        if s2.facts is None:
            return False
        return self.sets.subset(s2.facts, s1.facts)

    def _write(self, facts: HSet, dst: int) -> HSet:
        return self.sets.diff(facts, self.table.kill_set(dst))

    def transfer(self, instr: Instr, s: FactState) -> list[tuple[int, FactState]]:
        """
        Examples
        --------
        >>> sets = SetArena()
        >>> dom = FactDomain(FactTable(sets))
        >>> dom.transfer(Op(3, BinOp.ADD, 1, 2, 7), dom.entry_state())
        [(7, {1})]
        """
        if s.facts is None:
            return []
        facts = s.facts
        match instr:
            case Nop(succ):
                return [(succ, s)]
            case Const(dst, _, succ) | Move(dst, _, succ):
                return [(succ, FactState(self._write(facts, dst)))]
            case Op(dst, op, src1, src2, succ):
                index = None
                if dst not in (src1, src2):
                    index = self.table.intern(dst, op, src1, src2)
                facts = self._write(facts, dst)
                if index is not None:
                    facts = self.sets.add(facts, index)
                return [(succ, FactState(facts))]
            case Branch(_, _, _, ifso, ifnot):
                return [(ifso, s), (ifnot, s)]
            case Return():
                return []


def fact_kildall(
    f: Function,
    fuel: int | None = None,
    sets: SetArena | None = None,
    trace: list[int] | None = None,
) -> tuple[Invariant[FactState], FactTable] | Failure:
    """
    Compute the facts holding at every location, numbering facts as they are
    met.

    Parameters
    ----------
    f : Function
        a renumbered function
    fuel : int, optional
        maximal number of picks, by default 50 times the number of locations
    sets : SetArena, optional
        arena of the fact sets, by default a fresh one
    trace : list[int], optional
        receives the picked locations

    Returns
    -------
    tuple[Invariant[FactState], FactTable] | Failure
        the invariant with its fact table, or Failure(OUT_OF_FUEL)
    """
    table = FactTable(sets if sets is not None else SetArena())
    result = kildall(f, FactDomain(table), fuel=fuel, trace=trace)
    if isinstance(result, Failure):
        return result
    return result, table


def fact_check(f: Function, inv: Invariant[FactState], table: FactTable) -> CheckResult:
    """
    Check a fact invariant against its table, using only the numbering of
    the table: the reverse map and the kill sets are rebuilt and frozen before
    the inductiveness check.
    """
    try:
        rebuilt = FactTable.from_index(table.by_index, table.sets)
    except ValueError as e:
        return CounterExample(Reason.BAD_TABLE, None, f.entry, detail=str(e))

    for loc, state in inv.bindings():
        if state.facts is None:
            continue
        unknown = [i for i in state.facts if i not in rebuilt.by_index]
        if unknown:
            return CounterExample(
                Reason.UNKNOWN_FACT, None, loc, claimed=state, detail=f"index {unknown[0]}"
            )

    domain = FactDomain(rebuilt)
    return check_inductive(f, inv, domain.entry_state(), domain)


def apply_cse(f: Function, inv: Invariant[FactState], table: FactTable) -> Function:
    """
    Replace every operation whose value is already available in another
    register by a move from that register.

    Parameters
    ----------
    f : Function
        the function
    inv : Invariant[FactState]
        facts holding at each location, checked by ``fact_check`` first
    table : FactTable
        the numbering of the facts

    Returns
    -------
    Function
        the transformed function, same locations and control flow

    Raises
    ------
    UncheckedInvariantError
        if the invariant does not pass ``fact_check``
    """
    verdict = fact_check(f, inv, table)
    if not verdict:
        raise UncheckedInvariantError(f"function {f.name}: {verdict}")

    code: dict[int, Instr] = {}
    replaced = 0
    for loc, instr in f.code.bindings():
        state = inv.get(loc)
        if isinstance(instr, Op) and state is not None and state.facts is not None:
            for index in state.facts:
                fact = table.by_index[index]
                if (
                    fact.op == instr.op
                    and fact.src1 == instr.src1
                    and fact.src2 == instr.src2
                    and fact.dst != instr.dst
                ):
                    instr = Move(instr.dst, fact.dst, instr.succ)
                    replaced += 1
                    break
        code[loc] = instr
    logger.info(f"function {f.name}: {replaced} operation(s) replaced by moves")
    return Function.build(f.name, f.params, f.entry, code)
