"""
Concrete small-step interpreter over unbounded integers, the reference
semantics every analysis and transformation is tested against.
"""

from dataclasses import dataclass, replace
from typing import Callable, Mapping, Sequence

from rtlcheck.errors import UnboundRegisterError, UsageError
from rtlcheck.ir.function import Function
from rtlcheck.ir.instructions import Branch, Const, Instr, Move, Nop, Op, Return
from rtlcheck.ir.parser import Block


@dataclass(frozen=True)
class Returned:
    value: int


@dataclass(frozen=True)
class Trapped:
    location: int


@dataclass(frozen=True)
class OutOfFuel:
    pass


Outcome = Returned | Trapped | OutOfFuel

# called with (location, registers) before each instruction is executed
Observer = Callable[[int, Mapping[int, int]], None]


def _read(regs: dict[int, int], r: int, loc: int) -> int:
    try:
        return regs[r]
    except KeyError:
        raise UnboundRegisterError(r, loc) from None


def step(instr: Instr, regs: dict[int, int], loc: int) -> int | Returned | Trapped:
    """
    Execute one instruction, updating ``regs`` in place.

    Returns
    -------
    int | Returned | Trapped
        the next location, or the final outcome
    """
    match instr:
        case Nop(succ):
            return succ
        case Const(dst, value, succ):
            regs[dst] = value
            return succ
        case Move(dst, src, succ):
            regs[dst] = _read(regs, src, loc)
            return succ
        case Op(dst, op, src1, src2, succ):
            a, b = _read(regs, src1, loc), _read(regs, src2, loc)
            try:
                regs[dst] = op.apply(a, b)
            except ZeroDivisionError:
                return Trapped(loc)
            return succ
        case Branch(cmp, src1, src2, ifso, ifnot):
            a, b = _read(regs, src1, loc), _read(regs, src2, loc)
            return ifso if cmp.holds(a, b) else ifnot
        case Return(src):
            return Returned(_read(regs, src, loc))


def interpret(
    f: Function, inputs: Sequence[int], fuel: int, observer: Observer | None = None
) -> Outcome:
    """
    Run a function on concrete inputs

    Parameters
    ----------
    f : Function
        the function to run
    inputs : Sequence[int]
        one value per parameter
    fuel : int
        maximal number of executed instructions
    observer : Observer, optional
        called before each instruction with the location and the registers

    Returns
    -------
    Outcome
        Returned, Trapped at the dividing location, or OutOfFuel

    Raises
    ------
    UsageError
        if the number of inputs does not match the parameters
    UnboundRegisterError
        if a register is read before being written

    Examples
    --------
    >>> from rtlcheck.ir.parser import parse
    >>> f = parse("func f(r1, r2) entry 2 { 2: r3 := add r1 r2 -> 1  1: return r3 }")
    >>> interpret(f, [2, 3], fuel=10)
    Returned(value=5)
    """
    if len(inputs) != len(f.params):
        raise UsageError(
            f"function {f.name} expects {len(f.params)} inputs, got {len(inputs)}"
        )
    regs = dict(zip(f.params, inputs))
    loc = f.entry
    for _ in range(fuel):
        if observer is not None:
            observer(loc, regs)
        result = step(f.instr(loc), regs, loc)
        if isinstance(result, (Returned, Trapped)):
            return result
        loc = result
    return OutOfFuel()


def block_function(block: Block, result: int, name: str = "block") -> Function:
    """
    Wrap a straight-line block into a function returning one register.

    The block's instructions get locations n+1 down to 2 and location 1 holds
    ``return r<result>``, so the entry is maximal as after renumbering.
    """
    if block.inputs is None:
        raise UsageError("a block needs an inputs: header to be interpreted")
    n = len(block.instrs)
    code: dict[int, Instr] = {1: Return(result)}
    for i, instr in enumerate(block.instrs):
        loc = n + 1 - i
        code[loc] = replace(instr, succ=loc - 1)
    return Function.build(name, block.inputs, n + 1, code)


def run_block(
    block: Block, inputs: Sequence[int], registers: Sequence[int]
) -> dict[int, int] | Trapped:
    """
    Run a block through the interpreter and read several registers at its end

    Returns
    -------
    dict[int, int] | Trapped
        the value of each requested register, or the trap of the block
    """
    values = {}
    for r in registers:
        outcome = interpret(block_function(block, r), inputs, fuel=len(block.instrs) + 1)
        match outcome:
            case Trapped():
                return outcome
            case Returned(value):
                values[r] = value
    return values
