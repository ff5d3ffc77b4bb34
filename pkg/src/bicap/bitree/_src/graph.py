"""Neighbourhoods in the graph 𝔊 (the tree plus same-level arc adjacency).

At level ``j`` the vertices label the ``2**j`` dyadic arcs of the circle, read
circularly. ``γ`` is a 𝔊-predecessor of ``a`` when the arc of ``a`` is covered
by the arc of ``γ`` together with its two circular neighbours.

"""

__all__ = ["g_predecessors", "g_ancestor_count"]

from .nodes import Node1, prefix
from .nodeset import NodeSet
from .shape import TreeShape


def _triple(level: int, center: int) -> set[int]:
    n = 1 << level
    return {(center - 1) % n, center, (center + 1) % n}


def g_predecessors(a: Node1, /, shape: TreeShape | None = None) -> NodeSet:
    """The extended predecessor set ``P_𝔊(a)``.

    Arcs three times finer than ``J_a`` or more cannot cover it, so only the
    levels up to ``a.level + 1`` contribute: at or above ``a`` the neighbours of
    its ancestor, one level below the two children of ``a``. When ``shape`` is
    given, vertices deeper than its depth are left out.

    Examples
    --------
    >>> from bicap.bitree import Node1, g_predecessors
    >>> g_predecessors(Node1(0, 0)).nodes
    (Node1(level=0, pos=0), Node1(level=1, pos=0), Node1(level=1, pos=1))
    >>> len(g_predecessors(Node1(2, 0)))
    8

    """
    out: list[Node1] = []
    for level in range(a.level + 1):
        anc = prefix(a.pos, a.level - level)
        out.extend(Node1(level, p) for p in _triple(level, anc))
    if shape is None or a.level < shape.depth:
        out.extend(a.children)
    return NodeSet(out)


def g_ancestor_count(a: Node1, b: Node1, /, shape: TreeShape | None = None) -> int:
    """``d_𝔊(a ∧ b) = |P_𝔊(a) ∩ P_𝔊(b)|``.

    Examples
    --------
    >>> from bicap.bitree import Node1, g_ancestor_count
    >>> g_ancestor_count(Node1(0, 0), Node1(0, 0))
    3

    """
    pa = set(g_predecessors(a, shape))
    return sum(1 for node in g_predecessors(b, shape) if node in pa)
