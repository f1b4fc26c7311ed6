"""
Hash-consed symbolic terms over the input registers of a block.

Terms are only built through :meth:`TermArena.mk`, which rewrites at the root
before interning, so every interned term is in normal form and two terms with
the same handle denote the same value.
"""

from dataclasses import dataclass
from typing import Mapping

from rtlcheck.ir.instructions import BinOp
from rtlcheck.structures.intern import Arena, Handle, Shape

_INPUT_TAG = 0
_CONST_TAG = 1
_APP_TAG = 2
_OP_CODE = {op: code for code, op in enumerate(BinOp)}


@dataclass(frozen=True)
class TermInput(Shape):
    reg: int

    @property
    def children(self) -> tuple[Handle, ...]:
        return ()

    def hash_words(self) -> tuple[int, ...]:
        return (_INPUT_TAG, self.reg)

    __hash__ = Shape.__hash__


@dataclass(frozen=True)
class TermConst(Shape):
    value: int

    @property
    def children(self) -> tuple[Handle, ...]:
        return ()

    def hash_words(self) -> tuple[int, ...]:
        return (_CONST_TAG, self.value)

    __hash__ = Shape.__hash__


@dataclass(frozen=True)
class TermApp(Shape):
    op: BinOp
    arg1: Handle
    arg2: Handle

    @property
    def children(self) -> tuple[Handle, ...]:
        return (self.arg1, self.arg2)

    def hash_words(self) -> tuple[int, ...]:
        return (_APP_TAG, _OP_CODE[self.op], self.arg1.index, self.arg2.index)

    __hash__ = Shape.__hash__


TermShape = TermInput | TermConst | TermApp


@dataclass(frozen=True)
class DagStats:
    """Arena size and unfolded size of its largest term"""

    nodes: int
    would_be_tree_size: int

    def as_dict(self) -> dict[str, int]:
        return {"nodes": self.nodes, "would_be_tree_size": self.would_be_tree_size}


class TermArena:
    """
    Arena of terms with the rewriting smart constructor.

    Rules applied by ``mk``, at the root, until none applies:

    - operands of add and mul are ordered by handle index, constants last
    - add, sub and mul of two constants are folded (div never is)
    - x + 0 -> x, x - 0 -> x, x * 1 -> x, x * 0 -> 0, x - x -> 0
    - (x + c1) + c2 -> x + (c1 + c2)

    Examples
    --------
    >>> terms = TermArena()
    >>> terms.mk(BinOp.ADD, terms.const(3), terms.const(1)) == terms.const(4)
    True
    """

    def __init__(self) -> None:
        self.arena: Arena[TermShape] = Arena("term")
        self._sizes: dict[Handle, int] = {}

    def __len__(self) -> int:
        return len(self.arena)

    def shape(self, h: Handle) -> TermShape:
        return self.arena.shape(h)

    def input(self, reg: int) -> Handle:
        return self.arena.intern(TermInput(reg))

    def const(self, value: int) -> Handle:
        return self.arena.intern(TermConst(value))

    def app(self, op: BinOp, h1: Handle, h2: Handle) -> Handle:
        """Intern an application as is, without rewriting"""
        return self.arena.intern(TermApp(op, h1, h2))

    def _const_value(self, h: Handle) -> int | None:
        shape = self.shape(h)
        return shape.value if isinstance(shape, TermConst) else None

    def _order_key(self, h: Handle) -> tuple[bool, int]:
        return (isinstance(self.shape(h), TermConst), h.index)

    def mk(self, op: BinOp, h1: Handle, h2: Handle) -> Handle:
        """
        Normal form of ``op h1 h2``; h1 and h2 must already be normal

        Examples
        --------
        >>> terms = TermArena()
        >>> x = terms.input(1)
        >>> x1 = terms.mk(BinOp.ADD, x, terms.const(1))
        >>> terms.mk(BinOp.ADD, x1, terms.const(2)) == terms.mk(BinOp.ADD, x, terms.const(3))
        True
        """
        self.arena.check_handle(h1)
        self.arena.check_handle(h2)
        if op.commutative and self._order_key(h2) < self._order_key(h1):
            h1, h2 = h2, h1
        c1, c2 = self._const_value(h1), self._const_value(h2)

        match op:
            case BinOp.ADD:
                if c1 is not None and c2 is not None:
                    return self.const(c1 + c2)
                if c2 == 0:
                    return h1
                inner = self.shape(h1)
                if c2 is not None and isinstance(inner, TermApp) and inner.op is BinOp.ADD:
                    c_inner = self._const_value(inner.arg2)
                    if c_inner is not None:
                        return self.mk(BinOp.ADD, inner.arg1, self.const(c_inner + c2))
            case BinOp.SUB:
                if c1 is not None and c2 is not None:
                    return self.const(c1 - c2)
                if c2 == 0:
                    return h1
                if h1 == h2:
                    return self.const(0)
            case BinOp.MUL:
                if c1 is not None and c2 is not None:
                    return self.const(c1 * c2)
                if c2 == 1:
                    return h1
                if c2 == 0:
                    return self.const(0)
            case BinOp.DIV:
                pass
        return self.app(op, h1, h2)

    def size(self, h: Handle) -> int:
        """
        Number of nodes of the term once unfolded into a tree, computed on the
        DAG without unfolding it.
        """
        stack = [h]
        while stack:
            top = stack[-1]
            if top in self._sizes:
                stack.pop()
                continue
            shape = self.shape(top)
            if not isinstance(shape, TermApp):
                self._sizes[top] = 1
                stack.pop()
                continue
            missing = [c for c in shape.children if c not in self._sizes]
            if missing:
                stack.extend(missing)
            else:
                self._sizes[top] = 1 + self._sizes[shape.arg1] + self._sizes[shape.arg2]
                stack.pop()
        return self._sizes[h]

    def dag_stats(self) -> DagStats:
        """
        Number of interned nodes and size of the largest term unfolded as a
        tree.

        ``would_be_tree_size`` is the size of that single largest term, not the
        total over every term of the arena or every register of a block.
        """
        largest = max((self.size(h) for h, _ in self.arena), default=0)
        return DagStats(len(self.arena), largest)

    def evaluate(self, h: Handle, valuation: Mapping[int, int]) -> int:
        """
        Value of a term given the values of the input registers

        Raises
        ------
        ZeroDivisionError
            if a division of the term has a zero divisor
        KeyError
            if an input register has no value
        """
        values: dict[Handle, int] = {}
        stack = [h]
        while stack:
            top = stack[-1]
            if top in values:
                stack.pop()
                continue
            match self.shape(top):
                case TermInput(reg):
                    values[top] = valuation[reg]
                case TermConst(value):
                    values[top] = value
                case TermApp(op, a1, a2):
                    missing = [c for c in (a1, a2) if c not in values]
                    if missing:
                        stack.extend(missing)
                        continue
                    values[top] = op.apply(values[a1], values[a2])
            stack.pop()
        return values[h]

    def render(self, h: Handle, max_depth: int = 4) -> str:
        """Prefix rendering, subterms deeper than ``max_depth`` shown as ``...``"""
        match self.shape(h):
            case TermInput(reg):
                return f"r{reg}"
            case TermConst(value):
                return str(value)
            case TermApp(op, a1, a2):
                if max_depth <= 0:
                    return "..."
                left = self.render(a1, max_depth - 1)
                right = self.render(a2, max_depth - 1)
                return f"({op.value} {left} {right})"
