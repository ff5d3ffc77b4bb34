"""Sparse vertex sets."""

__all__ = ["NodeSet", "SetKind", "boundary_below"]

import bisect
from collections.abc import Iterable, Iterator
from typing import Literal, TypeAlias

import equinox as eqx

from .nodes import AnyNode, Node1, Node2, is_ancestor_any
from .shape import TreeShape

SetKind: TypeAlias = Literal["exact", "downset", "boundary"]
_KINDS = ("exact", "downset", "boundary")


def _canonical(nodes: Iterable[AnyNode]) -> tuple[AnyNode, ...]:
    return tuple(sorted(set(nodes)))


def _level_sum(node: AnyNode) -> int:
    if isinstance(node, Node2):
        return node.x.level + node.y.level
    return node.level


class NodeSet(eqx.Module):
    """A finite set of tree or bitree vertices.

    ``kind`` says how the stored nodes are read:

    - ``"exact"``: the set is exactly ``nodes``;
    - ``"downset"``: the union of the successor sets ``S(g)`` of the stored
      generators;
    - ``"boundary"``: the truncated-boundary vertices (leaves, or leaf pairs)
      below some generator, i.e. a boundary projection.

    Nodes are deduplicated and kept in lexicographic order.

    Examples
    --------
    >>> from bicap.bitree import Node1, NodeSet, TreeShape
    >>> s = NodeSet([Node1(1, 1), Node1(0, 0), Node1(1, 1)], kind="downset")
    >>> s.nodes
    (Node1(level=0, pos=0), Node1(level=1, pos=1))
    >>> s.generators().nodes
    (Node1(level=0, pos=0),)
    >>> s.contains(Node1(3, 7))
    True
    >>> len(s.materialize(TreeShape(2, ndim=1)))
    7

    """

    nodes: tuple[AnyNode, ...] = eqx.field(converter=_canonical, static=True)
    kind: SetKind = eqx.field(default="exact", static=True)

    def __check_init__(self) -> None:
        if self.kind not in _KINDS:
            msg = f"kind must be one of {_KINDS}, got {self.kind!r}"
            raise ValueError(msg)
        types = {type(n) for n in self.nodes}
        if not types <= {Node1, Node2} or len(types) > 1:
            msg = "a NodeSet holds either Node1 or Node2 vertices, not both"
            raise TypeError(msg)

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[AnyNode]:  # type: ignore[override]
        return iter(self.nodes)

    @property
    def is_empty(self) -> bool:
        return not self.nodes

    @property
    def ndim(self) -> int | None:
        """1 for tree vertices, 2 for bitree vertices, `None` when empty."""
        if not self.nodes:
            return None
        return 2 if isinstance(self.nodes[0], Node2) else 1

    def has(self, node: AnyNode, /) -> bool:
        """Literal membership among the stored nodes."""
        i = bisect.bisect_left(self.nodes, node)
        return i < len(self.nodes) and self.nodes[i] == node

    def contains(self, node: AnyNode, /, shape: TreeShape | None = None) -> bool:
        """Membership in the set this `NodeSet` denotes.

        ``shape`` is needed for boundary sets, whose members must be leaves.
        """
        if self.kind == "exact":
            return self.has(node)
        if self.kind == "boundary":
            if shape is None:
                msg = "boundary sets need a shape to test membership"
                raise ValueError(msg)
            if not _is_boundary(node, shape):
                return False
        return any(is_ancestor_any(g, node) for g in self.nodes)

    def generators(self) -> "NodeSet":
        """The maximal elements (an antichain), same ``kind``.

        A node is dropped when a strict ancestor is also stored. Shallow nodes
        look their predecessors up directly; very deep ones are compared
        against the maximal nodes found so far, scanning by level sum.
        """
        members = set(self.nodes)
        maximal: list[AnyNode] = []
        for node in sorted(self.nodes, key=lambda n: (_level_sum(n), n)):
            if _path_size(node) <= _LOOKUP_LIMIT:
                dominated = any(p in members for p in _strict_ancestors(node))
            else:
                dominated = any(is_ancestor_any(m, node) for m in maximal)
            if not dominated:
                maximal.append(node)
        return NodeSet(maximal, kind=self.kind)

    def materialize(self, shape: TreeShape, /) -> "NodeSet":
        """Enumerate the denoted set explicitly as an exact `NodeSet`."""
        if self.kind == "exact":
            return self
        from .ops import successors  # noqa: PLC0415

        out: set[AnyNode] = set()
        for g in self.generators():
            if self.kind == "boundary":
                out.update(boundary_below(g, shape))
            else:
                out.update(successors(g, shape))
        return NodeSet(out)

    def union(self, other: "NodeSet", /) -> "NodeSet":
        if self.kind != other.kind:
            msg = f"cannot merge a {self.kind!r} set with a {other.kind!r} set"
            raise ValueError(msg)
        return NodeSet((*self.nodes, *other.nodes), kind=self.kind)


def _is_boundary(node: AnyNode, shape: TreeShape) -> bool:
    if isinstance(node, Node2):
        return node.x.level == shape.depth and node.y.level == shape.depth
    return node.level == shape.depth


def _leaves_below(node: Node1, depth: int) -> list[Node1]:
    shift = depth - node.level
    start = node.pos << shift
    return [Node1(depth, start + l) for l in range(1 << shift)]


def boundary_below(node: AnyNode, shape: TreeShape, /) -> list[AnyNode]:
    """Truncated-boundary vertices below ``node``, lexicographic."""
    if isinstance(node, Node2):
        xs = _leaves_below(node.x, shape.depth)
        ys = _leaves_below(node.y, shape.depth)
        return [Node2(x, y) for x in xs for y in ys]
    return list(_leaves_below(node, shape.depth))


# Predecessor-path sizes up to which membership is checked by lookup.
_LOOKUP_LIMIT = 4096


def _path_size(node: AnyNode) -> int:
    if isinstance(node, Node2):
        return (node.x.level + 1) * (node.y.level + 1)
    return node.level + 1


def _strict_ancestors(node: AnyNode) -> Iterator[AnyNode]:
    if isinstance(node, Node2):
        for x in node.x.ancestors():
            for y in node.y.ancestors():
                if (x, y) != (node.x, node.y):
                    yield Node2(x, y)
    else:
        yield from node.ancestors()[:-1]
