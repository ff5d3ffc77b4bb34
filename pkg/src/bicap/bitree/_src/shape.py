"""Truncated tree shapes."""

__all__ = ["TreeShape"]

import itertools
from typing import Literal

import equinox as eqx

from .nodes import AnyNode, Node1, Node2


class TreeShape(eqx.Module):
    """The truncated dyadic tree of depth ``L`` (or its bitree square).

    Levels ``0..L`` exist and the level-``L`` vertices double as the
    truncated boundary. ``ndim`` selects the one-tree (``1``) or bitree
    (``2``) model.

    Examples
    --------
    >>> from bicap.bitree import TreeShape, Node1, Node2
    >>> shape = TreeShape(2)
    >>> shape.n_vertices
    7
    >>> shape.heap_index(Node1(2, 1))
    4
    >>> len(shape.leaves())
    16
    >>> shape.contains(Node2(Node1(3, 0), Node1(0, 0)))
    False
    >>> TreeShape(1, ndim=1).nodes()
    (Node1(level=0, pos=0), Node1(level=1, pos=0), Node1(level=1, pos=1))

    """

    depth: int = eqx.field(static=True)
    ndim: Literal[1, 2] = eqx.field(default=2, static=True)

    def __check_init__(self) -> None:
        if self.depth < 1:
            msg = f"depth must be >= 1, got {self.depth}"
            raise ValueError(msg)
        if self.ndim not in (1, 2):
            msg = f"ndim must be 1 or 2, got {self.ndim}"
            raise ValueError(msg)

    @property
    def n_vertices(self) -> int:
        """Number of vertices of one tree, ``2**(L+1) - 1``."""
        return (1 << (self.depth + 1)) - 1

    @property
    def n_leaves(self) -> int:
        """Number of level-``L`` vertices of one tree."""
        return 1 << self.depth

    @property
    def dense_shape(self) -> tuple[int, ...]:
        """Shape of a heap-ordered array over the whole (bi)tree."""
        return (self.n_vertices,) * self.ndim

    def heap_index(self, node: Node1, /) -> int:
        return (1 << node.level) - 1 + node.pos

    def node_at(self, index: int, /) -> Node1:
        """Inverse of :meth:`heap_index`."""
        level = (index + 1).bit_length() - 1
        return Node1(level, index + 1 - (1 << level))

    def is_leaf(self, node: Node1, /) -> bool:
        return node.level == self.depth

    def nodes1(self) -> tuple[Node1, ...]:
        """Vertices of one tree in heap order."""
        return tuple(
            Node1(j, l) for j in range(self.depth + 1) for l in range(1 << j)
        )

    def leaves1(self) -> tuple[Node1, ...]:
        return tuple(Node1(self.depth, l) for l in range(1 << self.depth))

    def nodes(self) -> tuple[AnyNode, ...]:
        """All vertices, in lexicographic order."""
        ns = self.nodes1()
        if self.ndim == 1:
            return ns
        return tuple(Node2(x, y) for x, y in itertools.product(ns, ns))

    def leaves(self) -> tuple[AnyNode, ...]:
        """The truncated boundary (``∂T`` or ``(∂T)^2``), lexicographic."""
        ls = self.leaves1()
        if self.ndim == 1:
            return ls
        return tuple(Node2(x, y) for x, y in itertools.product(ls, ls))

    def contains(self, node: AnyNode, /) -> bool:
        """Whether ``node`` is a vertex of this (bi)tree."""
        if isinstance(node, Node2):
            return self.ndim == 2 and self._contains1(node.x) and self._contains1(node.y)  # noqa: PLR2004
        return self.ndim == 1 and self._contains1(node)

    def _contains1(self, node: Node1) -> bool:
        # pos < 2**level, without materializing 2**level
        return 0 <= node.level <= self.depth and 0 <= node.pos and node.pos.bit_length() <= node.level
