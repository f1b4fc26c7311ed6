"""
Interval abstract domain over unbounded integers.

An abstract state is either Bottom or an environment from registers to
intervals in which an absent register stands for the full range, so the
environment of a function entry is the empty trie and joins drop every
register that one side does not bound.
"""

import math
from dataclasses import dataclass

from rtlcheck.errors import UsageError
from rtlcheck.ir.instructions import BinOp, Branch, Cmp, Const, Instr, Move, Nop, Op, Return
from rtlcheck.ir.instructions import trunc_div
from rtlcheck.structures.ptrie import OneSided, PTrie, ShareStats

Bound = int | float

NEG_INF = -math.inf
POS_INF = math.inf


def _fmt(b: Bound) -> str:
    if b == POS_INF:
        return "+inf"
    if b == NEG_INF:
        return "-inf"
    return str(b)


@dataclass(frozen=True)
class Interval:
    """
    A non-empty interval [lo, hi]; infinite bounds are ``math.inf`` floats,
    finite ones are ints.
    """

    lo: Bound
    hi: Bound

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise UsageError(f"empty interval [{self.lo}, {self.hi}]")
        if self.lo == POS_INF or self.hi == NEG_INF:
            raise UsageError("infinite interval bound on the wrong side")
        for b in (self.lo, self.hi):
            if isinstance(b, float) and b not in (NEG_INF, POS_INF):
                raise UsageError(f"finite bounds are integers, got {b}")

    @classmethod
    def const(cls, c: int) -> "Interval":
        return cls(c, c)

    @property
    def is_top(self) -> bool:
        return self.lo == NEG_INF and self.hi == POS_INF

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def includes(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __repr__(self) -> str:
        left = "(" if self.lo == NEG_INF else "["
        right = ")" if self.hi == POS_INF else "]"
        return f"{left}{_fmt(self.lo)}, {_fmt(self.hi)}{right}"


TOP = Interval(NEG_INF, POS_INF)


def hull(i1: Interval, i2: Interval) -> Interval:
    """Smallest interval containing both, returning an operand when possible"""
    if i1.includes(i2):
        return i1
    if i2.includes(i1):
        return i2
    return Interval(min(i1.lo, i2.lo), max(i1.hi, i2.hi))


def meet_interval(i1: Interval, i2: Interval) -> Interval | None:
    """
    Intersection of two intervals, None when it is empty

    Examples
    --------
    >>> meet_interval(Interval(0, 5), Interval(3, 9))
    [3, 5]
    >>> meet_interval(Interval(0, 1), Interval(3, 9)) is None
    True
    """
    lo, hi = max(i1.lo, i2.lo), min(i1.hi, i2.hi)
    if lo > hi:
        return None
    if lo == i1.lo and hi == i1.hi:
        return i1
    if lo == i2.lo and hi == i2.hi:
        return i2
    return Interval(lo, hi)


def widen_interval(old: Interval, new: Interval) -> Interval:
    """Keep stable bounds, send the bounds that grew to infinity"""
    lo = NEG_INF if new.lo < old.lo else old.lo
    hi = POS_INF if new.hi > old.hi else old.hi
    if lo == old.lo and hi == old.hi:
        return old
    return Interval(lo, hi)


def interval_leq(i1: Interval, i2: Interval) -> bool:
    return i2.includes(i1)


# finite bounds are ints of any size, which must never be mixed with float
# arithmetic
def _is_inf(a: Bound) -> bool:
    return isinstance(a, float)


def _add(a: Bound, b: Bound) -> Bound:
    if _is_inf(a):
        return a
    if _is_inf(b):
        return b
    return a + b


def _neg(a: Bound) -> Bound:
    return -a


def _mul(a: Bound, b: Bound) -> Bound:
    # 0 times an infinite bound stands for 0 times arbitrarily large integers
    if a == 0 or b == 0:
        return 0
    if _is_inf(a) or _is_inf(b):
        return POS_INF if (a > 0) == (b > 0) else NEG_INF
    return a * b


def _finite(i: Interval) -> bool:
    return not (_is_inf(i.lo) or _is_inf(i.hi))


def fwd_op(op: BinOp, i1: Interval, i2: Interval) -> Interval:
    """
    Interval of the results of ``op`` on any pair of values of i1 and i2

    Division returns the full range unless the divisor excludes zero and all
    bounds are finite. The division by zero itself is not tracked.

    Examples
    --------
    >>> fwd_op(BinOp.SUB, Interval(0, 1), Interval(0, 1))
    [-1, 1]
    >>> fwd_op(BinOp.MUL, Interval(-1, 2), Interval(3, 3))
    [-3, 6]
    """
    match op:
        case BinOp.ADD:
            return Interval(_add(i1.lo, i2.lo), _add(i1.hi, i2.hi))
        case BinOp.SUB:
            return Interval(_add(i1.lo, _neg(i2.hi)), _add(i1.hi, _neg(i2.lo)))
        case BinOp.MUL:
            corners = [_mul(a, b) for a in (i1.lo, i1.hi) for b in (i2.lo, i2.hi)]
            return Interval(min(corners), max(corners))
        case BinOp.DIV:
            if 0 in i2 or not (_finite(i1) and _finite(i2)):
                return TOP
            corners = [trunc_div(a, b) for a in (i1.lo, i1.hi) for b in (i2.lo, i2.hi)]
            return Interval(min(corners), max(corners))


def _refine_lt(x: Interval, y: Interval, strict: bool) -> tuple[Interval | None, Interval | None]:
    shift = 1 if strict else 0
    x2 = meet_interval(x, Interval(NEG_INF, _add(y.hi, -shift)))
    y2 = meet_interval(y, Interval(_add(x.lo, shift), POS_INF))
    if x2 is None or y2 is None:
        return None, None
    return x2, y2


def refine(
    cmp: Cmp, taken: bool, i1: Interval, i2: Interval
) -> tuple[Interval | None, Interval | None]:
    """
    Narrow both operands of a comparison knowing its outcome

    Parameters
    ----------
    cmp : Cmp
        the comparison
    taken : bool
        True when the comparison holds, False when it fails
    i1, i2 : Interval
        the operands

    Returns
    -------
    tuple[Interval | None, Interval | None]
        the refined operands; (None, None) when no pair of values can satisfy
        the assumption

    Examples
    --------
    >>> refine(Cmp.LT, True, Interval(0, 10), Interval(5, 5))
    ([0, 4], [5, 5])
    >>> refine(Cmp.EQ, True, TOP, Interval(42, 42))
    ([42, 42], [42, 42])
    """
    c = cmp if taken else cmp.negate()
    match c:
        case Cmp.EQ:
            m = meet_interval(i1, i2)
            return m, m
        case Cmp.NE:
            return i1, i2
        case Cmp.LT:
            return _refine_lt(i1, i2, strict=True)
        case Cmp.LE:
            return _refine_lt(i1, i2, strict=False)
        case Cmp.GT:
            y2, x2 = _refine_lt(i2, i1, strict=True)
            return x2, y2
        case Cmp.GE:
            y2, x2 = _refine_lt(i2, i1, strict=False)
            return x2, y2


@dataclass(frozen=True)
class AbsState:
    """
    Bottom when ``regs`` is None, otherwise an environment where an absent
    register is unconstrained. The full-range interval is never stored.
    """

    regs: PTrie[Interval] | None

    @property
    def is_bottom(self) -> bool:
        return self.regs is None

    def get(self, r: int) -> Interval:
        if self.regs is None:
            raise UsageError("no register value in the bottom state")
        found = self.regs.get(r)
        return TOP if found is None else found

    def assign(self, r: int, value: Interval, stats: ShareStats | None = None) -> "AbsState":
        if self.regs is None:
            return self
        regs = self.regs.remove(r, stats) if value.is_top else self.regs.set(r, value, stats)
        return self if regs is self.regs else AbsState(regs)

    @classmethod
    def of(cls, bindings: dict[int, Interval]) -> "AbsState":
        return cls(PTrie.from_bindings((r, i) for r, i in sorted(bindings.items()) if not i.is_top))

    def __repr__(self) -> str:
        if self.regs is None:
            return "Bottom"
        inner = ", ".join(f"r{r}: {i!r}" for r, i in self.regs.bindings())
        return f"{{{inner}}}"


BOTTOM = AbsState(None)
TOP_STATE = AbsState(PTrie.empty())


def _not_top(i: Interval) -> Interval | None:
    return None if i.is_top else i


class IntervalDomain:
    """
    Lattice operations and transfer functions of the interval analysis.

    Parameters
    ----------
    entry_state : AbsState, optional
        the state at the function entry, by default every register unconstrained
    stats : ShareStats, optional
        counters updated by every trie operation
    shortcut : bool, optional
        use identity shortcuts in joins, widenings and comparisons, by default True
    """

    def __init__(
        self,
        entry_state: AbsState | None = None,
        stats: ShareStats | None = None,
        shortcut: bool = True,
    ) -> None:
        self._entry_state = entry_state if entry_state is not None else TOP_STATE
        self.stats = stats if stats is not None else ShareStats()
        self.shortcut = shortcut

    def bottom(self) -> AbsState:
        return BOTTOM

    def is_bottom(self, s: AbsState) -> bool:
        return s.is_bottom

    def entry_state(self) -> AbsState:
        return self._entry_state

    def top(self) -> AbsState:
        return TOP_STATE

    def join(self, s1: AbsState, s2: AbsState) -> AbsState:
        """Pointwise hull; a register bound on one side only becomes unconstrained"""
        if s1.regs is None:
            return s2
        if s2.regs is None:
            return s1
        regs = PTrie.combine(
            lambda a, b: _not_top(hull(a, b)),
            s1.regs,
            s2.regs,
            left_only=OneSided.DROP,
            right_only=OneSided.DROP,
            idempotent=True,
            shortcut=self.shortcut,
            stats=self.stats,
        )
        if regs is s1.regs:
            return s1
        if regs is s2.regs:
            return s2
        return AbsState(regs)

    def widen(self, old: AbsState, new: AbsState) -> AbsState:
        if old.regs is None:
            return new
        if new.regs is None:
            return old
        regs = PTrie.combine(
            lambda a, b: _not_top(widen_interval(a, b)),
            old.regs,
            new.regs,
            left_only=OneSided.DROP,
            right_only=OneSided.DROP,
            idempotent=True,
            shortcut=self.shortcut,
            stats=self.stats,
        )
        return old if regs is old.regs else AbsState(regs)

    def leq(self, s1: AbsState, s2: AbsState) -> bool:
        if s1.regs is None:
            return True
        if s2.regs is None:
            return False
        # a register bound in s1 only is below the full range of s2
        return PTrie.leq(
            interval_leq,
            s1.regs,
            s2.regs,
            left_only=True,
            right_only=False,
            shortcut=self.shortcut,
            stats=self.stats,
        )

    def transfer(self, instr: Instr, s: AbsState) -> list[tuple[int, AbsState]]:
        """
        Successor states of one instruction, one pair per feasible successor

        Examples
        --------
        >>> dom = IntervalDomain()
        >>> dom.transfer(Move(2, 1, 5), AbsState.of({1: Interval(0, 1)}))
        [(5, {r1: [0, 1], r2: [0, 1]})]
        """
        if s.is_bottom:
            return []
        match instr:
            case Nop(succ):
                return [(succ, s)]
            case Const(dst, value, succ):
                return [(succ, s.assign(dst, Interval.const(value), self.stats))]
            case Move(dst, src, succ):
                return [(succ, s.assign(dst, s.get(src), self.stats))]
            case Op(dst, op, src1, src2, succ):
                value = fwd_op(op, s.get(src1), s.get(src2))
                return [(succ, s.assign(dst, value, self.stats))]
            case Branch(cmp, src1, src2, ifso, ifnot):
                result = []
                for taken, succ in ((True, ifso), (False, ifnot)):
                    x, y = refine(cmp, taken, s.get(src1), s.get(src2))
                    if x is None or y is None:
                        continue
                    if src1 == src2:
                        x = y = meet_interval(x, y)
                        if x is None:
                            continue
                    result.append((succ, s.assign(src1, x, self.stats).assign(src2, y, self.stats)))
                return result
            case Return():
                return []
