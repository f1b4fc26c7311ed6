"""
Canonical persistent radix-2 tries from positive integers to values.

Keys are decomposed from the low-order bit upwards: key 1 stops at the value
slot of the current node, otherwise the lowest bit selects the left (0) or
right (1) child and the walk continues with ``k >> 1``. A node with no value
and two empty children is never built, so two tries holding the same bindings
are structurally equal.

Nothing is ever mutated: operations return fresh nodes or sub-nodes of their
inputs. Sharing is opportunistic (nodes are not interned); identity between two
nodes is only ever used as a sound shortcut for equality.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Generic, Iterable, Iterator, TypeVar

from rtlcheck.errors import UsageError

V = TypeVar("V")


@dataclass
class ShareStats:
    """
    Counters for one measurement context; callers reset them explicitly.
    """

    nodes_allocated: int = 0
    nodes_visited: int = 0
    shortcut_hits: int = 0

    def reset(self) -> None:
        self.nodes_allocated = 0
        self.nodes_visited = 0
        self.shortcut_hits = 0

    def as_dict(self) -> dict[str, int]:
        return {
            "nodes_allocated": self.nodes_allocated,
            "nodes_visited": self.nodes_visited,
            "shortcut_hits": self.shortcut_hits,
        }


class OneSided(Enum):
    """
    What ``combine`` does with bindings present in one input only.

    KEEP returns them unchanged (the subtree is shared, not traversed), DROP
    removes them, APPLY calls the combining function with absent on the other
    side.
    """

    KEEP = "keep"
    DROP = "drop"
    APPLY = "apply"


class _Node:
    __slots__ = ("left", "value", "right")

    def __init__(self, left: "_Node | None", value: Any, right: "_Node | None") -> None:
        self.left = left
        self.value = value
        self.right = right


def check_key(k: int) -> None:
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise UsageError(f"trie keys are positive integers, got {k!r}")


def _alloc(left, value, right, stats: ShareStats) -> _Node | None:
    if left is None and value is None and right is None:
        return None
    stats.nodes_allocated += 1
    return _Node(left, value, right)


def _rebuild(node, left, value, right, stats: ShareStats) -> _Node | None:
    if (
        node is not None
        and node.left is left
        and node.value is value
        and node.right is right
    ):
        return node
    return _alloc(left, value, right, stats)


def _same_value(x: Any, y: Any) -> bool:
    return x is y or (x is not None and y is not None and x == y)


def _set(node, k: int, v, stats: ShareStats) -> _Node | None:
    stats.nodes_visited += 1
    if node is None:
        left = value = right = None
    else:
        left, value, right = node.left, node.value, node.right
    if k == 1:
        return _rebuild(node, left, v, right, stats)
    if k & 1:
        return _rebuild(node, left, value, _set(right, k >> 1, v, stats), stats)
    return _rebuild(node, _set(left, k >> 1, v, stats), value, right, stats)


def _remove(node, k: int, stats: ShareStats) -> _Node | None:
    if node is None:
        return None
    stats.nodes_visited += 1
    if k == 1:
        return _rebuild(node, node.left, None, node.right, stats)
    if k & 1:
        return _rebuild(
            node, node.left, node.value, _remove(node.right, k >> 1, stats), stats
        )
    return _rebuild(
        node, _remove(node.left, k >> 1, stats), node.value, node.right, stats
    )


class _Combiner:
    """Parameters of one ``combine`` call, threaded through the recursion."""

    __slots__ = ("f", "left_only", "right_only", "idempotent", "shortcut", "stats")

    def __init__(self, f, left_only, right_only, idempotent, shortcut, stats):
        self.f = f
        self.left_only = left_only
        self.right_only = right_only
        self.idempotent = idempotent
        self.shortcut = shortcut
        self.stats = stats

    def value(self, x, y):
        if x is None and y is None:
            return None
        if y is None:
            return self.one_sided_value(x, self.left_only, lambda v: self.f(v, None))
        if x is None:
            return self.one_sided_value(y, self.right_only, lambda v: self.f(None, v))
        return self.f(x, y)

    @staticmethod
    def one_sided_value(v, policy: OneSided, g):
        if v is None:
            return None
        match policy:
            case OneSided.KEEP:
                return v
            case OneSided.DROP:
                return None
            case _:
                return g(v)

    def one_sided(self, node, policy: OneSided, g) -> _Node | None:
        if node is None:
            return None
        self.stats.nodes_visited += 1
        if self.shortcut:
            if policy is OneSided.KEEP:
                return node
            if policy is OneSided.DROP:
                return None
        left = self.one_sided(node.left, policy, g)
        value = self.one_sided_value(node.value, policy, g)
        right = self.one_sided(node.right, policy, g)
        if (
            self.shortcut
            and left is node.left
            and right is node.right
            and _same_value(value, node.value)
        ):
            return node
        return _alloc(left, value, right, self.stats)

    def combine(self, a, b) -> _Node | None:
        if a is None and b is None:
            return None
        if b is None:
            return self.one_sided(a, self.left_only, lambda v: self.f(v, None))
        if a is None:
            return self.one_sided(b, self.right_only, lambda v: self.f(None, v))
        self.stats.nodes_visited += 1
        if self.shortcut and a is b and self.idempotent:
            self.stats.shortcut_hits += 1
            return a

        left = self.combine(a.left, b.left)
        value = self.value(a.value, b.value)
        right = self.combine(a.right, b.right)

        if self.shortcut:
            for node in (a, b):
                if (
                    left is node.left
                    and right is node.right
                    and _same_value(value, node.value)
                ):
                    return node
        return _alloc(left, value, right, self.stats)


Policy = bool | Callable[[Any], bool]


def _one_sided_leq(node, policy: Policy, stats: ShareStats) -> bool:
    # canonical non-empty subtrees hold at least one binding
    if isinstance(policy, bool):
        return policy
    stack = [node]
    while stack:
        current = stack.pop()
        if current is None:
            continue
        stats.nodes_visited += 1
        if current.value is not None and not policy(current.value):
            return False
        stack.append(current.right)
        stack.append(current.left)
    return True


def _leq(leq_v, a, b, left_only: Policy, right_only: Policy, shortcut, stats) -> bool:
    if a is None and b is None:
        return True
    stats.nodes_visited += 1
    if shortcut and a is b:
        stats.shortcut_hits += 1
        return True
    if b is None:
        return _one_sided_leq(a, left_only, stats)
    if a is None:
        return _one_sided_leq(b, right_only, stats)

    x, y = a.value, b.value
    if x is not None and y is not None:
        ok = leq_v(x, y)
    elif x is not None:
        ok = left_only if isinstance(left_only, bool) else left_only(x)
    elif y is not None:
        ok = right_only if isinstance(right_only, bool) else right_only(y)
    else:
        ok = True
    return (
        ok
        and _leq(leq_v, a.left, b.left, left_only, right_only, shortcut, stats)
        and _leq(leq_v, a.right, b.right, left_only, right_only, shortcut, stats)
    )


def _equal(eq_v, a, b, shortcut: bool, stats: ShareStats) -> bool:
    if a is None or b is None:
        return a is b
    stats.nodes_visited += 1
    if shortcut and a is b:
        stats.shortcut_hits += 1
        return True
    if (a.value is None) != (b.value is None):
        return False
    if a.value is not None and not eq_v(a.value, b.value):
        return False
    return _equal(eq_v, a.left, b.left, shortcut, stats) and _equal(
        eq_v, a.right, b.right, shortcut, stats
    )


class PTrie(Generic[V]):
    """
    Canonical persistent map from positive integers to values.

    ``None`` stands for an absent binding and cannot be stored.

    Examples
    --------
    >>> t = PTrie.empty().set(5, "a")
    >>> t.get(5), t.get(4)
    ('a', None)
    """

    __slots__ = ("_root",)

    def __init__(self, root: _Node | None = None) -> None:
        self._root = root

    @classmethod
    def empty(cls) -> "PTrie[V]":
        return _EMPTY

    @classmethod
    def from_bindings(
        cls, bindings: Iterable[tuple[int, V]], stats: ShareStats | None = None
    ) -> "PTrie[V]":
        trie = _EMPTY
        for k, v in bindings:
            trie = trie.set(k, v, stats=stats)
        return trie

    @classmethod
    def _wrap(cls, root: _Node | None) -> "PTrie[V]":
        return _EMPTY if root is None else cls(root)

    def is_empty(self) -> bool:
        return self._root is None

    def get(self, k: int) -> V | None:
        check_key(k)
        node = self._root
        while node is not None:
            if k == 1:
                return node.value
            node = node.right if k & 1 else node.left
            k >>= 1
        return None

    def __contains__(self, k: int) -> bool:
        return self.get(k) is not None

    def set(self, k: int, v: V, stats: ShareStats | None = None) -> "PTrie[V]":
        """
        Bind k to v. Only the nodes on the path to k are reallocated.

        Raises
        ------
        UsageError
            if k is not a positive integer or v is None
        """
        check_key(k)
        if v is None:
            raise UsageError("None cannot be stored in a trie, use remove")
        stats = stats if stats is not None else ShareStats()
        root = _set(self._root, k, v, stats)
        return self if root is self._root else PTrie._wrap(root)

    def remove(self, k: int, stats: ShareStats | None = None) -> "PTrie[V]":
        """Drop the binding of k, collapsing branches left empty."""
        check_key(k)
        stats = stats if stats is not None else ShareStats()
        root = _remove(self._root, k, stats)
        return self if root is self._root else PTrie._wrap(root)

    @staticmethod
    def combine(
        f: Callable[[V | None, V | None], V | None],
        t1: "PTrie[V]",
        t2: "PTrie[V]",
        *,
        left_only: OneSided = OneSided.APPLY,
        right_only: OneSided = OneSided.APPLY,
        idempotent: bool = False,
        shortcut: bool = True,
        stats: ShareStats | None = None,
    ) -> "PTrie[V]":
        """
        Pointwise combination of two tries.

        Parameters
        ----------
        f : Callable
            combines the two values bound to a key; must map (None, None) to None
        t1, t2 : PTrie
            the inputs
        left_only, right_only : OneSided, optional
            handling of keys bound in t1 only (resp. t2 only), by default APPLY
        idempotent : bool, optional
            f(v, v) == v for all v, which lets identical subtrees be returned
            untouched, by default False
        shortcut : bool, optional
            use identity tests and reuse input subtrees; False gives the naive
            full traversal, by default True
        stats : ShareStats, optional
            counters to update

        Returns
        -------
        PTrie
            the combined trie, sharing every subtree it can with the inputs
        """
        stats = stats if stats is not None else ShareStats()
        combiner = _Combiner(f, left_only, right_only, idempotent, shortcut, stats)
        root = combiner.combine(t1._root, t2._root)
        if root is t1._root:
            return t1
        if root is t2._root:
            return t2
        return PTrie._wrap(root)

    @staticmethod
    def leq(
        leq_v: Callable[[V, V], bool],
        t1: "PTrie[V]",
        t2: "PTrie[V]",
        *,
        left_only: Policy = False,
        right_only: Policy = False,
        shortcut: bool = True,
        stats: ShareStats | None = None,
    ) -> bool:
        """
        Pointwise order between two tries.

        Parameters
        ----------
        leq_v : Callable
            order on values bound in both tries; must be reflexive
        t1, t2 : PTrie
            the compared tries
        left_only : bool | Callable, optional
            verdict for a value bound in t1 only, by default False
        right_only : bool | Callable, optional
            verdict for a value bound in t2 only, by default False
        shortcut : bool, optional
            answer True on identical subtrees without visiting them

        Returns
        -------
        bool
            True iff the order holds at every key bound in either trie
        """
        stats = stats if stats is not None else ShareStats()
        return _leq(leq_v, t1._root, t2._root, left_only, right_only, shortcut, stats)

    @staticmethod
    def equal(
        eq_v: Callable[[V, V], bool],
        t1: "PTrie[V]",
        t2: "PTrie[V]",
        *,
        shortcut: bool = True,
        stats: ShareStats | None = None,
    ) -> bool:
        """Extensional equality; with eq_v = (==) it is structural equality."""
        stats = stats if stats is not None else ShareStats()
        return _equal(eq_v, t1._root, t2._root, shortcut, stats)

    @staticmethod
    def same_node(t1: "PTrie[V]", t2: "PTrie[V]") -> bool:
        """
        Identity test: True implies the two tries are structurally equal;
        False says nothing.
        """
        return t1._root is t2._root

    def is_canonical(self) -> bool:
        """Debug full traversal: no node without value and children."""
        stack = [self._root]
        while stack:
            node = stack.pop()
            if node is None:
                continue
            if node.left is None and node.value is None and node.right is None:
                return False
            stack.append(node.left)
            stack.append(node.right)
        return True

    def bindings(self) -> list[tuple[int, V]]:
        """Bindings sorted by key"""
        result = []
        stack = [(self._root, 0, 0)]
        while stack:
            node, acc, depth = stack.pop()
            if node is None:
                continue
            if node.value is not None:
                result.append((acc | (1 << depth), node.value))
            stack.append((node.left, acc, depth + 1))
            stack.append((node.right, acc | (1 << depth), depth + 1))
        result.sort(key=lambda kv: kv[0])
        return result

    def keys(self) -> list[int]:
        return [k for k, _ in self.bindings()]

    def values(self) -> list[V]:
        return [v for _, v in self.bindings()]

    def __iter__(self) -> Iterator[int]:
        return iter(self.keys())

    def __len__(self) -> int:
        count = 0
        stack = [self._root]
        while stack:
            node = stack.pop()
            if node is None:
                continue
            if node.value is not None:
                count += 1
            stack.append(node.left)
            stack.append(node.right)
        return count

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PTrie):
            return NotImplemented
        return PTrie.equal(lambda x, y: x == y, self, other)

    __hash__ = None

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v!r}" for k, v in self.bindings())
        return f"PTrie({{{inner}}})"


_EMPTY: PTrie = PTrie(None)
