"""Vertices of the dyadic tree and of the bitree.

Vertices are plain named tuples so they hash, compare and sort cheaply. Tuple
order is the lexicographic order ``(level_x, pos_x, level_y, pos_y)`` used for
every deterministic traversal; it is *not* the tree partial order, which is
given by :func:`bicap.bitree.is_ancestor`.

"""

__all__ = ["Node1", "Node2", "ROOT1", "ROOT2", "AnyNode", "prefix"]

from typing import NamedTuple, TypeAlias


def prefix(pos: int, drop: int, /) -> int:
    """Drop the ``drop`` low bits of ``pos``.

    Safe for arbitrarily large ``drop`` (levels of very deep sparse trees do not
    fit in a machine shift count).

    Examples
    --------
    >>> from bicap.bitree import prefix
    >>> prefix(0b1011, 2)
    2
    >>> prefix(5, 10**30)
    0

    """
    if drop <= 0:
        return pos
    return 0 if drop >= pos.bit_length() else pos >> drop


class Node1(NamedTuple):
    """A vertex of the dyadic tree ``T``.

    ``pos`` is a ``level``-bit binary prefix: the children of ``(j, l)`` are
    ``(j + 1, 2l)`` and ``(j + 1, 2l + 1)``.

    Examples
    --------
    >>> from bicap.bitree import Node1
    >>> Node1(2, 3).parent
    Node1(level=1, pos=1)
    >>> Node1(0, 0).parent is None
    True
    >>> Node1(1, 1).children
    (Node1(level=2, pos=2), Node1(level=2, pos=3))

    """

    level: int
    pos: int

    @property
    def is_root(self) -> bool:
        return self.level == 0

    @property
    def parent(self) -> "Node1 | None":
        """The parent vertex, `None` at the root."""
        if self.level == 0:
            return None
        return Node1(self.level - 1, self.pos >> 1)

    @property
    def children(self) -> "tuple[Node1, Node1]":
        return (
            Node1(self.level + 1, 2 * self.pos),
            Node1(self.level + 1, 2 * self.pos + 1),
        )

    def ancestor(self, level: int, /) -> "Node1":
        """The ancestor (or self) at ``level``."""
        if not 0 <= level <= self.level:
            msg = f"level {level} is not in [0, {self.level}]"
            raise ValueError(msg)
        return Node1(level, prefix(self.pos, self.level - level))

    def ancestors(self) -> "tuple[Node1, ...]":
        """Predecessor path from the root down to (and including) ``self``."""
        return tuple(self.ancestor(j) for j in range(self.level + 1))


class Node2(NamedTuple):
    """A vertex ``(x, y)`` of the bitree ``T^2``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2
    >>> a = Node2(Node1(1, 0), Node1(2, 3))
    >>> a.parent_x
    Node2(x=Node1(level=0, pos=0), y=Node1(level=2, pos=3))
    >>> len(a.children)
    4

    """

    x: Node1
    y: Node1

    @property
    def is_root(self) -> bool:
        return self.x.level == 0 and self.y.level == 0

    @property
    def parent_x(self) -> "Node2 | None":
        px = self.x.parent
        return None if px is None else Node2(px, self.y)

    @property
    def parent_y(self) -> "Node2 | None":
        py = self.y.parent
        return None if py is None else Node2(self.x, py)

    @property
    def parent(self) -> "Node2":
        """Coordinatewise parent; a root coordinate stays at the root."""
        return Node2(self.x.parent or self.x, self.y.parent or self.y)

    @property
    def children(self) -> "tuple[Node2, ...]":
        return tuple(Node2(cx, cy) for cx in self.x.children for cy in self.y.children)


AnyNode: TypeAlias = Node1 | Node2

ROOT1 = Node1(0, 0)
"""The root ``o`` of ``T``."""

ROOT2 = Node2(ROOT1, ROOT1)
"""The root ``(o, o)`` of ``T^2``."""


def is_ancestor1(b: Node1, a: Node1, /) -> bool:
    """``b >= a`` in ``T``."""
    return b.level <= a.level and prefix(a.pos, a.level - b.level) == b.pos


def is_ancestor_any(b: AnyNode, a: AnyNode, /) -> bool:
    """``b >= a`` in ``T`` or ``T^2``, whichever the nodes belong to."""
    if isinstance(b, Node2):
        return is_ancestor1(b.x, a.x) and is_ancestor1(b.y, a.y)  # type: ignore[union-attr]
    return is_ancestor1(b, a)  # type: ignore[arg-type]
