"""Child-swapping automorphisms of the dyadic tree."""

__all__ = ["TreeAutomorphism", "random_automorphism"]

import equinox as eqx
import jax.random as jr
from jaxtyping import PRNGKeyArray
from plum import dispatch

from .nodes import Node1, Node2
from .shape import TreeShape


class TreeAutomorphism(eqx.Module):
    """A tree automorphism given by one swap flag per internal vertex.

    The flag of vertex ``u`` (heap order) says whether the two subtrees below
    ``u`` are exchanged.

    Examples
    --------
    >>> from bicap.bitree import Node1, TreeAutomorphism
    >>> swap_root = TreeAutomorphism(depth=2, flips=(True, False, False))
    >>> swap_root(Node1(2, 1))
    Node1(level=2, pos=3)
    >>> swap_root(Node1(0, 0))
    Node1(level=0, pos=0)

    """

    depth: int = eqx.field(static=True)
    flips: tuple[bool, ...] = eqx.field(converter=tuple, static=True)

    def __check_init__(self) -> None:
        expected = (1 << self.depth) - 1
        if len(self.flips) != expected:
            msg = f"need {expected} flips for depth {self.depth}, got {len(self.flips)}"
            raise ValueError(msg)

    @dispatch
    def __call__(self: "TreeAutomorphism", node: Node1, /) -> Node1:
        pos = 0
        for j in range(node.level):
            bit = (node.pos >> (node.level - 1 - j)) & 1
            ancestor = node.pos >> (node.level - j)
            heap = (1 << j) - 1 + ancestor
            pos = 2 * pos + (bit ^ int(self.flips[heap]))
        return Node1(node.level, pos)

    @dispatch
    def __call__(self: "TreeAutomorphism", node: Node2, /) -> Node2:  # noqa: F811
        return Node2(self(node.x), self(node.y))


def random_automorphism(key: PRNGKeyArray, shape: TreeShape, /) -> TreeAutomorphism:
    """Draw a uniformly random child-swapping automorphism."""
    flips = jr.bernoulli(key, 0.5, shape=((1 << shape.depth) - 1,))
    return TreeAutomorphism(depth=shape.depth, flips=tuple(bool(f) for f in flips))
