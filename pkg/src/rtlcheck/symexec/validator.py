"""
Translation validation of straight-line blocks by symbolic execution.

Both blocks are executed over symbolic inputs in one term arena; they are
declared equivalent when every live register ends with the same handle in both
and every potential trap of the target is a potential trap of the source.
Equal handles imply equal values; different handles prove nothing, so a
rejection may be conservative.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from rtlcheck.errors import UnboundRegisterError, UsageError
from rtlcheck.ir.instructions import Const, Instr, Move, Nop, Op
from rtlcheck.ir.parser import Block
from rtlcheck.structures.hset import HSet, SetArena
from rtlcheck.structures.intern import Handle
from rtlcheck.structures.ptrie import PTrie
from rtlcheck.symexec.terms import DagStats, TermArena

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymState:
    """
    Final symbolic state of a block.

    Attributes
    ----------
    regs : PTrie[Handle]
        term of every register written or given as input
    traps : HSet
        the division terms met during the execution, each stored as its
        handle index + 1
    """

    regs: PTrie[Handle]
    traps: HSet

    def value(self, r: int, terms: TermArena) -> Handle:
        """Term of a register, its input term when the block never wrote it"""
        found = self.regs.get(r)
        return found if found is not None else terms.input(r)


def sym_exec(
    instrs: Iterable[Instr], inputs: Sequence[int], terms: TermArena, sets: SetArena
) -> SymState:
    """
    Execute a block over symbolic inputs

    Parameters
    ----------
    instrs : Iterable[Instr]
        non-branching instructions, executed in order
    inputs : Sequence[int]
        registers holding the symbolic inputs at the start
    terms : TermArena
        arena of the produced terms
    sets : SetArena
        arena of the trap sets

    Returns
    -------
    SymState
        the final register terms and the potential traps

    Raises
    ------
    UnboundRegisterError
        if a register is read before being written
    UsageError
        on a branch or a return
    """
    regs: PTrie[Handle] = PTrie.from_bindings((r, terms.input(r)) for r in sorted(set(inputs)))
    traps = sets.empty()

    def read(r: int) -> Handle:
        found = regs.get(r)
        if found is None:
            raise UnboundRegisterError(r)
        return found

    for instr in instrs:
        match instr:
            case Nop():
                continue
            case Const(dst, value, _):
                regs = regs.set(dst, terms.const(value))
            case Move(dst, src, _):
                regs = regs.set(dst, read(src))
            case Op(dst, op, src1, src2, _):
                t1, t2 = read(src1), read(src2)
                if op.may_trap:
                    # recorded before rewriting, which could erase the division
                    traps = sets.add(traps, terms.app(op, t1, t2).index + 1)
                regs = regs.set(dst, terms.mk(op, t1, t2))
            case _:
                raise UsageError(f"{type(instr).__name__} is not allowed in a block")
    return SymState(regs, traps)


class RejectReason(Enum):
    LIVE_MISMATCH = "live register mismatch"
    TRAPS = "trap set not included"
    INPUT_MISMATCH = "input mismatch"


@dataclass(frozen=True)
class Verdict:
    """
    Outcome of a validation.

    ``register`` and the two rendered terms describe the first live register
    whose terms differ; ``dag`` describes the shared term arena.
    """

    equivalent: bool
    reason: RejectReason | None = None
    register: int | None = None
    src_term: str = ""
    tgt_term: str = ""
    detail: str = ""
    dag: DagStats = field(default_factory=lambda: DagStats(0, 0))

    def __bool__(self) -> bool:
        return self.equivalent

    def __str__(self) -> str:
        if self.equivalent:
            return "equivalent"
        text = f"rejected: {self.reason.value}"
        if self.register is not None:
            text += f" on r{self.register}"
        if self.src_term or self.tgt_term:
            text += f" (source {self.src_term}, target {self.tgt_term})"
        if self.detail:
            text += f" ({self.detail})"
        return text


def validate(
    src: Block,
    tgt: Block,
    inputs: Sequence[int] | None = None,
    live_out: Iterable[int] | None = None,
    terms: TermArena | None = None,
) -> Verdict:
    """
    Check that a target block computes the same live values as a source block

    Parameters
    ----------
    src, tgt : Block
        the blocks
    inputs : Sequence[int], optional
        input registers, by default the ``inputs:`` header shared by both blocks
    live_out : Iterable[int], optional
        registers compared at the end, by default the ``live:`` trailer of the
        source block
    terms : TermArena, optional
        the arena to use, by default a fresh one

    Returns
    -------
    Verdict
        equivalent, or the reason of the rejection

    Raises
    ------
    UsageError
        if the input or live registers are neither given nor declared
    """
    if inputs is None:
        if src.inputs is None and tgt.inputs is None:
            raise UsageError("input registers are neither given nor declared")
        if src.inputs is not None and tgt.inputs is not None and set(src.inputs) != set(tgt.inputs):
            return Verdict(False, RejectReason.INPUT_MISMATCH, detail="different inputs: headers")
        inputs = src.inputs if src.inputs is not None else tgt.inputs
    if live_out is None:
        live_out = src.live if src.live is not None else tgt.live
        if live_out is None:
            raise UsageError("live registers are neither given nor declared")

    terms = terms if terms is not None else TermArena()
    sets = SetArena()
    try:
        s_src = sym_exec(src.instrs, inputs, terms, sets)
        s_tgt = sym_exec(tgt.instrs, inputs, terms, sets)
    except UnboundRegisterError as e:
        return Verdict(
            False,
            RejectReason.INPUT_MISMATCH,
            register=e.register,
            detail="read before being written",
            dag=terms.dag_stats(),
        )

    for r in sorted(set(live_out)):
        h_src, h_tgt = s_src.value(r, terms), s_tgt.value(r, terms)
        if h_src != h_tgt:
            verdict = Verdict(
                False,
                RejectReason.LIVE_MISMATCH,
                register=r,
                src_term=terms.render(h_src),
                tgt_term=terms.render(h_tgt),
                dag=terms.dag_stats(),
            )
            logger.info(str(verdict))
            return verdict

    if not sets.subset(s_tgt.traps, s_src.traps):
        verdict = Verdict(False, RejectReason.TRAPS, dag=terms.dag_stats())
        logger.info(str(verdict))
        return verdict
    return Verdict(True, dag=terms.dag_stats())
