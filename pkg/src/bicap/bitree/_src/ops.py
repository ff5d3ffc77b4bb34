"""Order, meets and ancestor counts."""

__all__ = [
    "meet1",
    "meet2",
    "ancestor_count",
    "ancestor_count2",
    "common_ancestor_count",
    "is_ancestor",
    "in_successors",
    "predecessors",
    "successors",
    "meet_count_matrix",
]

import itertools
from collections.abc import Sequence

import jax.numpy as jnp
from jaxtyping import Array, Int
from plum import dispatch

from .nodes import AnyNode, Node1, Node2, is_ancestor1, prefix
from .nodeset import NodeSet
from .shape import TreeShape

# Depths at which the vectorized meet path is exact (levels and positions in
# float64 mantissa range).
_VECTOR_DEPTH_LIMIT = 52


def meet1(a: Node1, b: Node1, /) -> Node1:
    """Deepest common ancestor ``a ∧ b``.

    Levels are aligned by dropping low bits of the deeper position; the xor of
    the aligned prefixes then tells how many more levels to strip.

    Examples
    --------
    >>> from bicap.bitree import Node1, meet1
    >>> meet1(Node1(1, 0), Node1(1, 1))
    Node1(level=0, pos=0)
    >>> meet1(Node1(3, 5), Node1(3, 4))
    Node1(level=2, pos=2)
    >>> meet1(Node1(3, 5), Node1(1, 1))
    Node1(level=1, pos=1)

    """
    level = min(a.level, b.level)
    pa = prefix(a.pos, a.level - level)
    pb = prefix(b.pos, b.level - level)
    strip = (pa ^ pb).bit_length()
    return Node1(level - strip, pa >> strip)


def meet2(a: Node2, b: Node2, /) -> Node2:
    """Coordinatewise meet in ``T^2``."""
    return Node2(meet1(a.x, b.x), meet1(a.y, b.y))


def ancestor_count(a: Node1, /) -> int:
    """``d_T(a) = level + 1``, the number of vertices on the root path.

    Examples
    --------
    >>> from bicap.bitree import Node1, ancestor_count
    >>> ancestor_count(Node1(0, 0)), ancestor_count(Node1(1, 1))
    (1, 2)

    """
    return a.level + 1


def ancestor_count2(a: Node2, /) -> int:
    """``d_{T^2}(a) = d_T(a_x) d_T(a_y)``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, ancestor_count2
    >>> ancestor_count2(Node2(Node1(2, 0), Node1(1, 1)))
    6

    """
    return (a.x.level + 1) * (a.y.level + 1)


@dispatch
def common_ancestor_count(a: Node1, b: Node1, /) -> int:
    """``d(a ∧ b)``: number of common predecessors.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, common_ancestor_count
    >>> a, b = Node1(1, 0), Node1(1, 1)
    >>> common_ancestor_count(a, b)
    1
    >>> common_ancestor_count(Node2(a, a), Node2(a, a))
    4

    """
    return ancestor_count(meet1(a, b))


@dispatch
def common_ancestor_count(a: Node2, b: Node2, /) -> int:  # noqa: F811
    return ancestor_count(meet1(a.x, b.x)) * ancestor_count(meet1(a.y, b.y))


@dispatch
def is_ancestor(b: Node1, a: Node1, /) -> bool:
    """Whether ``b >= a``: ``b`` lies on the root path of ``a`` (or equals it).

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, is_ancestor
    >>> is_ancestor(Node1(1, 1), Node1(3, 6))
    True
    >>> is_ancestor(Node1(3, 6), Node1(1, 1))
    False
    >>> o, a = Node1(0, 0), Node1(1, 0)
    >>> is_ancestor(Node2(o, a), Node2(a, a))
    True

    """
    return is_ancestor1(b, a)


@dispatch
def is_ancestor(b: Node2, a: Node2, /) -> bool:  # noqa: F811
    return is_ancestor(b.x, a.x) and is_ancestor(b.y, a.y)


def in_successors(beta: Node2, alpha: Node2, /) -> bool:
    """``alpha ∈ S(beta)``, equivalently ``beta ∈ P(alpha)``."""
    return is_ancestor(beta, alpha)


@dispatch
def predecessors(a: Node1, /) -> NodeSet:
    """The predecessor set ``P(a)``: the root path including ``a``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, predecessors
    >>> a = Node1(1, 0)
    >>> len(predecessors(Node2(a, a)))
    4
    >>> predecessors(Node1(0, 0)).nodes
    (Node1(level=0, pos=0),)

    """
    return NodeSet(a.ancestors())


@dispatch
def predecessors(a: Node2, /) -> NodeSet:  # noqa: F811
    return NodeSet(
        Node2(x, y) for x, y in itertools.product(a.x.ancestors(), a.y.ancestors())
    )


@dispatch
def successors(b: Node1, shape: TreeShape, /) -> NodeSet:
    """The successor set ``S(b)`` within ``shape``."""
    return NodeSet(_successors1(b, shape.depth))


@dispatch
def successors(b: Node2, shape: TreeShape, /) -> NodeSet:  # noqa: F811
    xs = _successors1(b.x, shape.depth)
    ys = _successors1(b.y, shape.depth)
    return NodeSet(Node2(x, y) for x, y in itertools.product(xs, ys))


def _successors1(b: Node1, depth: int) -> list[Node1]:
    out = []
    for j in range(b.level, depth + 1):
        shift = j - b.level
        out.extend(Node1(j, (b.pos << shift) + l) for l in range(1 << shift))
    return out


# -------------------------------------------------------------------


def meet_count_matrix(
    rows: Sequence[AnyNode], cols: Sequence[AnyNode], /
) -> Int[Array, "r c"]:
    """Matrix of ``d(rows[i] ∧ cols[j])``, vectorized.

    Only valid for depths up to 52; deeper (sparse) nodes go through
    :func:`common_ancestor_count` one pair at a time.

    Examples
    --------
    >>> from bicap.bitree import Node1, meet_count_matrix
    >>> pts = [Node1(1, 0), Node1(1, 1)]
    >>> meet_count_matrix(pts, pts).tolist()
    [[2, 1], [1, 2]]

    """
    if not rows or not cols:
        return jnp.zeros((len(rows), len(cols)), dtype=int)
    if isinstance(rows[0], Node2):
        return _meet_count_1d(
            [r.x for r in rows], [c.x for c in cols]
        ) * _meet_count_1d([r.y for r in rows], [c.y for c in cols])
    return _meet_count_1d(rows, cols)


def _meet_count_1d(rows: Sequence[Node1], cols: Sequence[Node1]) -> Int[Array, "r c"]:
    deepest = max(n.level for n in itertools.chain(rows, cols))
    if deepest > _VECTOR_DEPTH_LIMIT:
        msg = f"vectorized meets need depth <= {_VECTOR_DEPTH_LIMIT}, got {deepest}"
        raise ValueError(msg)
    la = jnp.asarray([n.level for n in rows], dtype=jnp.int64)[:, None]
    pa = jnp.asarray([n.pos for n in rows], dtype=jnp.int64)[:, None]
    lb = jnp.asarray([n.level for n in cols], dtype=jnp.int64)[None, :]
    pb = jnp.asarray([n.pos for n in cols], dtype=jnp.int64)[None, :]
    level = jnp.minimum(la, lb)
    xor = jnp.bitwise_xor(
        jnp.right_shift(pa, la - level), jnp.right_shift(pb, lb - level)
    )
    # bit_length(xor): frexp exponent, exact below 2**53
    _, exponent = jnp.frexp(xor.astype(jnp.float64))
    return level - exponent.astype(jnp.int64) + 1
