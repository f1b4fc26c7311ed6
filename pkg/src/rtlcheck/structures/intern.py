"""
Hash-consing arenas.

An :class:`Arena` is the only factory for nodes of interned types: interning a
shape returns the handle already issued for an equal shape, or a fresh one.
Within one arena, handle equality is therefore structural equality, including
the negative answer. Arenas are meant to be local to one phase of a computation
and discarded with all their handles and memo tables at the end of it.
"""

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Generic, Hashable, Iterator, TypeVar

from rtlcheck.errors import ForeignHandleError, UsageError

MASK64 = (1 << 64) - 1

_ARENA_SERIAL = itertools.count()


def mix64(*words: int) -> int:
    """
    Fixed 64-bit mixing of a sequence of integers (splitmix64 finalizer).

    Integers wider than 64 bits are folded chunk by chunk together with their
    sign, so every Python int hashes deterministically across runs.

    Parameters
    ----------
    *words : int
        the words to mix

    Returns
    -------
    int
        an unsigned 64-bit hash
    """
    h = 0x9E3779B97F4A7C15
    for word in words:
        chunks = [1 if word < 0 else 0]
        magnitude = abs(word)
        while True:
            chunks.append(magnitude & MASK64)
            magnitude >>= 64
            if not magnitude:
                break
        for chunk in chunks:
            h = (h ^ chunk) & MASK64
            h = (h + 0x9E3779B97F4A7C15) & MASK64
            h = ((h ^ (h >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
            h = ((h ^ (h >> 27)) * 0x94D049BB133111EB) & MASK64
            h ^= h >> 31
    return h


class Handle:
    """
    A reference to a node interned in an arena.

    Handles are dense indices issued in creation order. They are only
    meaningful together with the arena that issued them.
    """

    __slots__ = ("_index", "_arena")

    def __init__(self, index: int, arena: int) -> None:
        self._index = index
        self._arena = arena

    @property
    def index(self) -> int:
        """Returns the index of this handle."""
        return self._index

    @property
    def arena(self) -> int:
        """Serial number of the issuing arena."""
        return self._arena

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, Handle):
            return self._index == other._index and self._arena == other._arena
        return False

    def __hash__(self) -> int:
        return hash((self._index, self._arena))

    def __lt__(self, other: "Handle") -> bool:
        return self._index < other._index

    def __repr__(self) -> str:
        return f"#{self._index}"


class Shape(ABC):
    """
    Node shape of an interned type: a constructor tag, child handles and a
    payload. Subclasses must be immutable (frozen dataclasses).
    """

    @property
    @abstractmethod
    def children(self) -> tuple[Handle, ...]:
        """Handles of the sub-nodes"""

    @abstractmethod
    def hash_words(self) -> tuple[int, ...]:
        """Integers fed to :func:`mix64`; equal shapes give equal words."""

    def __hash__(self) -> int:
        return mix64(*self.hash_words())


S = TypeVar("S", bound=Shape)


@dataclass
class ArenaStats:
    hits: int = 0
    misses: int = 0
    memo_hits: int = 0
    memo_misses: int = 0

    def reset(self) -> None:
        self.hits = self.misses = self.memo_hits = self.memo_misses = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "hits": self.hits,
            "misses": self.misses,
            "memo_hits": self.memo_hits,
            "memo_misses": self.memo_misses,
        }


class Arena(Generic[S]):
    """
    An arena whose nodes are guaranteed to be unique.

    The table maps shapes to handles; Python's dict chains colliding buckets and
    compares full shapes, so correctness never depends on hash quality. An
    arena has a single owner and must not be shared between threads.

    Parameters
    ----------
    kind : str, optional
        name of the interned type, used in error messages
    """

    def __init__(self, kind: str = "node") -> None:
        self.kind = kind
        self._serial = next(_ARENA_SERIAL)
        self._table: dict[S, Handle] = {}
        self._nodes: list[S] = []
        self._memo: dict[tuple[Hashable, Handle, Handle], Any] = {}
        self.stats = ArenaStats()

    def __len__(self) -> int:
        """Return the current number of nodes stored in this arena."""
        return len(self._nodes)

    def __iter__(self) -> Iterator[tuple[Handle, S]]:
        for i, shape in enumerate(self._nodes):
            yield Handle(i, self._serial), shape

    @property
    def serial(self) -> int:
        return self._serial

    def reset(self) -> None:
        """Forget every node and memo entry; previously issued handles become invalid."""
        self._serial = next(_ARENA_SERIAL)
        self._table.clear()
        self._nodes.clear()
        self._memo.clear()
        self.stats.reset()

    def check_handle(self, handle: Handle) -> None:
        """
        Raise if the handle was not issued by this arena.

        Raises
        ------
        ForeignHandleError
            if the handle comes from another arena or is out of range
        """
        if handle.arena != self._serial or not 0 <= handle.index < len(self._nodes):
            raise ForeignHandleError(
                self.kind, handle.index, handle.arena, self._serial
            )

    def intern(self, shape: S) -> Handle:
        """
        Return the handle of ``shape``, creating it if the arena has no equal shape.

        Parameters
        ----------
        shape : S
            the node shape; all its children must belong to this arena

        Returns
        -------
        Handle
            the unique handle of this shape in this arena
        """
        found = self._table.get(shape)
        if found is not None:
            self.stats.hits += 1
            return found

        for child in shape.children:
            self.check_handle(child)

        self.stats.misses += 1
        handle = Handle(len(self._nodes), self._serial)
        self._nodes.append(shape)
        self._table[shape] = handle
        return handle

    def lookup(self, shape: S) -> Handle | None:
        """Handle of an already interned shape, None otherwise"""
        return self._table.get(shape)

    def shape(self, handle: Handle) -> S:
        """Shape denoted by a handle of this arena"""
        self.check_handle(handle)
        return self._nodes[handle.index]

    def memo_lookup(self, op_tag: Hashable, h1: Handle, h2: Handle) -> Any | None:
        """
        Last result stored for (op_tag, h1, h2), None if there is none.
        """
        self.check_handle(h1)
        self.check_handle(h2)
        result = self._memo.get((op_tag, h1, h2))
        if result is None:
            self.stats.memo_misses += 1
        else:
            self.stats.memo_hits += 1
        return result

    def memo_store(self, op_tag: Hashable, h1: Handle, h2: Handle, result: Any) -> None:
        """Record the result of a binary operation on two handles."""
        self.check_handle(h1)
        self.check_handle(h2)
        if result is None:
            raise UsageError("memoized results cannot be None")
        self._memo[(op_tag, h1, h2)] = result

    @property
    def memo_size(self) -> int:
        return len(self._memo)

    def check_unique(self) -> bool:
        """
        Debug full scan: every stored shape is distinct and every child
        was issued strictly before its parent.
        """
        if len(set(self._nodes)) != len(self._nodes):
            return False
        if len(self._table) != len(self._nodes):
            return False
        for i, shape in enumerate(self._nodes):
            if any(child.index >= i for child in shape.children):
                return False
        return True


def new_arena(kind: str = "node") -> Arena:
    """Create an empty arena"""
    return Arena(kind)
