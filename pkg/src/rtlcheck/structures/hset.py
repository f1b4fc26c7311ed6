"""
Hash-consed canonical sets of positive integers.

Members are laid out like :mod:`rtlcheck.structures.ptrie` keys (low-order bit
first) and every node is interned in a :class:`SetArena`. Canonicity plus
interning make handle equality coincide with set equality, so ``set_equal`` is
O(1) in both directions and union, intersection and inclusion stop at the
first pair of identical sub-handles.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, TypeVar

from rtlcheck.structures.intern import Arena, Handle, Shape
from rtlcheck.structures.ptrie import ShareStats, check_key

A = TypeVar("A")

_EMPTY_TAG = 0
_NODE_TAG = 1


@dataclass(frozen=True)
class SetEmpty(Shape):
    @property
    def children(self) -> tuple[Handle, ...]:
        return ()

    def hash_words(self) -> tuple[int, ...]:
        return (_EMPTY_TAG,)

    __hash__ = Shape.__hash__


@dataclass(frozen=True)
class SetNode(Shape):
    left: Handle
    here: bool
    right: Handle

    @property
    def children(self) -> tuple[Handle, ...]:
        return (self.left, self.right)

    def hash_words(self) -> tuple[int, ...]:
        return (_NODE_TAG, self.left.index, int(self.here), self.right.index)

    __hash__ = Shape.__hash__


SetShape = SetEmpty | SetNode


@dataclass(frozen=True)
class HSet:
    """
    A set value: a handle into the arena that built it.

    Two HSets of the same arena are equal iff they hold the same members.
    """

    handle: Handle
    arena: "SetArena"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HSet):
            return NotImplemented
        return self.handle == other.handle

    def __hash__(self) -> int:
        return hash(self.handle)

    def __contains__(self, k: int) -> bool:
        return self.arena.mem(self, k)

    def __iter__(self):
        return iter(self.arena.elements(self))

    def __len__(self) -> int:
        return self.arena.fold(self, lambda _, acc: acc + 1, 0)

    def __repr__(self) -> str:
        return f"HSet({self.arena.elements(self)})"


class SetArena:
    """
    Factory and operations of hash-consed sets.

    The arena has a single owner; HSet values it produced are immutable and can
    be read anywhere, but new sets are only built through it.

    Examples
    --------
    >>> sets = SetArena()
    >>> s = sets.from_iterable([3, 1, 2])
    >>> sets.elements(s)
    [1, 2, 3]
    """

    def __init__(self) -> None:
        self.arena: Arena[SetShape] = Arena("set")
        self.stats = ShareStats()
        self._empty = HSet(self.arena.intern(SetEmpty()), self)

    def __len__(self) -> int:
        return len(self.arena)

    def _check(self, s: HSet) -> Handle:
        self.arena.check_handle(s.handle)
        return s.handle

    def _wrap(self, handle: Handle) -> HSet:
        return HSet(handle, self)

    def _node(self, left: Handle, here: bool, right: Handle) -> Handle:
        empty = self._empty.handle
        if left == empty and not here and right == empty:
            return empty
        return self.arena.intern(SetNode(left, here, right))

    def _shape(self, handle: Handle) -> SetShape:
        return self.arena.shape(handle)

    def empty(self) -> HSet:
        return self._empty

    def singleton(self, k: int) -> HSet:
        return self.add(self._empty, k)

    def from_iterable(self, members: Iterable[int]) -> HSet:
        s = self._empty
        for k in members:
            s = self.add(s, k)
        return s

    def _update(self, h: Handle, k: int, here: bool) -> Handle:
        shape = self._shape(h)
        empty = self._empty.handle
        if isinstance(shape, SetEmpty):
            if not here:
                return h
            left, current, right = empty, False, empty
        else:
            left, current, right = shape.left, shape.here, shape.right
        if k == 1:
            if current == here:
                return h
            return self._node(left, here, right)
        if k & 1:
            return self._node(left, current, self._update(right, k >> 1, here))
        return self._node(self._update(left, k >> 1, here), current, right)

    def add(self, s: HSet, k: int) -> HSet:
        check_key(k)
        return self._wrap(self._update(self._check(s), k, True))

    def remove(self, s: HSet, k: int) -> HSet:
        check_key(k)
        return self._wrap(self._update(self._check(s), k, False))

    def mem(self, s: HSet, k: int) -> bool:
        check_key(k)
        h = self._check(s)
        while True:
            shape = self._shape(h)
            if isinstance(shape, SetEmpty):
                return False
            if k == 1:
                return shape.here
            h = shape.right if k & 1 else shape.left
            k >>= 1

    @staticmethod
    def _sym_key(h1: Handle, h2: Handle) -> tuple[Handle, Handle]:
        return (h1, h2) if h1.index <= h2.index else (h2, h1)

    def _union(self, h1: Handle, h2: Handle) -> Handle:
        empty = self._empty.handle
        if h1 == h2:
            self.stats.shortcut_hits += 1
            return h1
        if h1 == empty:
            return h2
        if h2 == empty:
            return h1
        k1, k2 = self._sym_key(h1, h2)
        memo = self.arena.memo_lookup("union", k1, k2)
        if memo is not None:
            return memo
        self.stats.nodes_visited += 1
        n1, n2 = self._shape(h1), self._shape(h2)
        result = self._node(
            self._union(n1.left, n2.left),
            n1.here or n2.here,
            self._union(n1.right, n2.right),
        )
        self.arena.memo_store("union", k1, k2, result)
        return result

    def _naive_union(self, h1: Handle, h2: Handle) -> Handle:
        empty = self._empty.handle
        if h1 == empty and h2 == empty:
            return empty
        self.stats.nodes_visited += 1
        n1, n2 = self._shape(h1), self._shape(h2)
        l1, here1, r1 = (
            (empty, False, empty) if isinstance(n1, SetEmpty) else (n1.left, n1.here, n1.right)
        )
        l2, here2, r2 = (
            (empty, False, empty) if isinstance(n2, SetEmpty) else (n2.left, n2.here, n2.right)
        )
        return self._node(
            self._naive_union(l1, l2), here1 or here2, self._naive_union(r1, r2)
        )

    def union(self, s1: HSet, s2: HSet, shortcut: bool = True) -> HSet:
        """
        Union, returning an input handle whenever it already is the result.

        Parameters
        ----------
        s1, s2 : HSet
            sets of this arena
        shortcut : bool, optional
            use handle equality and memoization; False traverses both sets
            entirely, by default True
        """
        h1, h2 = self._check(s1), self._check(s2)
        if not shortcut:
            return self._wrap(self._naive_union(h1, h2))
        return self._wrap(self._union(h1, h2))

    def _inter(self, h1: Handle, h2: Handle) -> Handle:
        empty = self._empty.handle
        if h1 == h2:
            self.stats.shortcut_hits += 1
            return h1
        if h1 == empty or h2 == empty:
            return empty
        k1, k2 = self._sym_key(h1, h2)
        memo = self.arena.memo_lookup("inter", k1, k2)
        if memo is not None:
            return memo
        self.stats.nodes_visited += 1
        n1, n2 = self._shape(h1), self._shape(h2)
        result = self._node(
            self._inter(n1.left, n2.left),
            n1.here and n2.here,
            self._inter(n1.right, n2.right),
        )
        self.arena.memo_store("inter", k1, k2, result)
        return result

    def inter(self, s1: HSet, s2: HSet) -> HSet:
        """Intersection, the join of dataflow fact sets"""
        return self._wrap(self._inter(self._check(s1), self._check(s2)))

    def _diff(self, h1: Handle, h2: Handle) -> Handle:
        empty = self._empty.handle
        if h1 == h2:
            self.stats.shortcut_hits += 1
            return empty
        if h1 == empty or h2 == empty:
            return h1
        memo = self.arena.memo_lookup("diff", h1, h2)
        if memo is not None:
            return memo
        self.stats.nodes_visited += 1
        n1, n2 = self._shape(h1), self._shape(h2)
        result = self._node(
            self._diff(n1.left, n2.left),
            n1.here and not n2.here,
            self._diff(n1.right, n2.right),
        )
        self.arena.memo_store("diff", h1, h2, result)
        return result

    def diff(self, s1: HSet, s2: HSet) -> HSet:
        """Members of s1 that are not in s2"""
        return self._wrap(self._diff(self._check(s1), self._check(s2)))

    def _subset(self, h1: Handle, h2: Handle) -> bool:
        empty = self._empty.handle
        if h1 == h2 or h1 == empty:
            self.stats.shortcut_hits += 1
            return True
        if h2 == empty:
            return False
        memo = self.arena.memo_lookup("subset", h1, h2)
        if memo is not None:
            return memo
        self.stats.nodes_visited += 1
        n1, n2 = self._shape(h1), self._shape(h2)
        # the first member of s1 missing from s2 ends the walk
        result = (
            (not n1.here or n2.here)
            and self._subset(n1.left, n2.left)
            and self._subset(n1.right, n2.right)
        )
        self.arena.memo_store("subset", h1, h2, result)
        return result

    def subset(self, s1: HSet, s2: HSet) -> bool:
        return self._subset(self._check(s1), self._check(s2))

    def set_equal(self, s1: HSet, s2: HSet) -> bool:
        """Handle equality; the negative answer is exact too."""
        return self._check(s1) == self._check(s2)

    def _naive_equal(self, h1: Handle, h2: Handle) -> bool:
        n1, n2 = self._shape(h1), self._shape(h2)
        self.stats.nodes_visited += 1
        if isinstance(n1, SetEmpty) or isinstance(n2, SetEmpty):
            return type(n1) is type(n2)
        return (
            n1.here == n2.here
            and self._naive_equal(n1.left, n2.left)
            and self._naive_equal(n1.right, n2.right)
        )

    def naive_equal(self, s1: HSet, s2: HSet) -> bool:
        """
        Structural comparison by full traversal, without any identity shortcut.
        """
        return self._naive_equal(self._check(s1), self._check(s2))

    def elements(self, s: HSet) -> list[int]:
        """Members in ascending order"""
        result = []
        stack = [(self._check(s), 0, 0)]
        while stack:
            h, acc, depth = stack.pop()
            shape = self._shape(h)
            if isinstance(shape, SetEmpty):
                continue
            if shape.here:
                result.append(acc | (1 << depth))
            stack.append((shape.left, acc, depth + 1))
            stack.append((shape.right, acc | (1 << depth), depth + 1))
        result.sort()
        return result

    def fold(self, s: HSet, f: Callable[[int, A], A], acc: A) -> A:
        for k in self.elements(s):
            acc = f(k, acc)
        return acc
