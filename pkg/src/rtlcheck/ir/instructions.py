from dataclasses import dataclass
from enum import Enum


class BinOp(Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"

    @property
    def may_trap(self) -> bool:
        """div is the only operator that can trap (zero divisor)"""
        return self is BinOp.DIV

    @property
    def commutative(self) -> bool:
        return self in (BinOp.ADD, BinOp.MUL)

    def apply(self, a: int, b: int) -> int:
        """
        Evaluate the operator on mathematical integers

        Raises
        ------
        ZeroDivisionError
            for a division by zero
        """
        match self:
            case BinOp.ADD:
                return a + b
            case BinOp.SUB:
                return a - b
            case BinOp.MUL:
                return a * b
            case BinOp.DIV:
                return trunc_div(a, b)


def trunc_div(a: int, b: int) -> int:
    """Integer quotient rounded toward zero"""
    if b == 0:
        raise ZeroDivisionError("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b > 0) else -q


class Cmp(Enum):
    EQ = "eq"
    NE = "ne"
    LT = "lt"
    LE = "le"
    GT = "gt"
    GE = "ge"

    def holds(self, a: int, b: int) -> bool:
        match self:
            case Cmp.EQ:
                return a == b
            case Cmp.NE:
                return a != b
            case Cmp.LT:
                return a < b
            case Cmp.LE:
                return a <= b
            case Cmp.GT:
                return a > b
            case Cmp.GE:
                return a >= b

    def negate(self) -> "Cmp":
        """Comparison holding exactly when this one fails"""
        match self:
            case Cmp.EQ:
                return Cmp.NE
            case Cmp.NE:
                return Cmp.EQ
            case Cmp.LT:
                return Cmp.GE
            case Cmp.LE:
                return Cmp.GT
            case Cmp.GT:
                return Cmp.LE
            case Cmp.GE:
                return Cmp.LT


@dataclass(frozen=True)
class Nop:
    succ: int

    def successors(self) -> tuple[int, ...]:
        return (self.succ,)

    def uses(self) -> tuple[int, ...]:
        return ()

    def defined(self) -> int | None:
        return None


@dataclass(frozen=True)
class Const:
    dst: int
    value: int
    succ: int

    def successors(self) -> tuple[int, ...]:
        return (self.succ,)

    def uses(self) -> tuple[int, ...]:
        return ()

    def defined(self) -> int | None:
        return self.dst


@dataclass(frozen=True)
class Move:
    dst: int
    src: int
    succ: int

    def successors(self) -> tuple[int, ...]:
        return (self.succ,)

    def uses(self) -> tuple[int, ...]:
        return (self.src,)

    def defined(self) -> int | None:
        return self.dst


@dataclass(frozen=True)
class Op:
    dst: int
    op: BinOp
    src1: int
    src2: int
    succ: int

    def successors(self) -> tuple[int, ...]:
        return (self.succ,)

    def uses(self) -> tuple[int, ...]:
        return (self.src1, self.src2)

    def defined(self) -> int | None:
        return self.dst


@dataclass(frozen=True)
class Branch:
    cmp: Cmp
    src1: int
    src2: int
    ifso: int
    ifnot: int

    def successors(self) -> tuple[int, ...]:
        """true successor first"""
        return (self.ifso, self.ifnot)

    def uses(self) -> tuple[int, ...]:
        return (self.src1, self.src2)

    def defined(self) -> int | None:
        return None


@dataclass(frozen=True)
class Return:
    src: int

    def successors(self) -> tuple[int, ...]:
        return ()

    def uses(self) -> tuple[int, ...]:
        return (self.src,)

    def defined(self) -> int | None:
        return None


Instr = Nop | Const | Move | Op | Branch | Return

# instructions allowed in straight-line blocks
BLOCK_INSTRS = (Nop, Const, Move, Op)


def with_successors(instr: Instr, mapping: dict[int, int]) -> Instr:
    """
    Copy of an instruction with its successor locations relabelled.
    """
    match instr:
        case Nop(succ):
            return Nop(mapping[succ])
        case Const(dst, value, succ):
            return Const(dst, value, mapping[succ])
        case Move(dst, src, succ):
            return Move(dst, src, mapping[succ])
        case Op(dst, op, src1, src2, succ):
            return Op(dst, op, src1, src2, mapping[succ])
        case Branch(cmp, src1, src2, ifso, ifnot):
            return Branch(cmp, src1, src2, mapping[ifso], mapping[ifnot])
        case Return():
            return instr
