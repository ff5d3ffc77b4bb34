"""Boundary projection and disintegration of measures onto the boundary."""

__all__ = ["boundary_projection", "disintegrate_to_boundary", "martingale_ratio_check"]

import math

from bicap.bitree import (
    AnyNode,
    Node1,
    NodeSet,
    TreeShape,
    ancestor_count,
    boundary_below,
    is_ancestor,
    meet1,
)
from bicap.potential import Measure


def boundary_projection(target: NodeSet, /) -> NodeSet:
    """``S_b(E)``: the boundary vertices below some vertex of ``E``.

    Returned as a boundary set given by its generator antichain.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, NodeSet, TreeShape
    >>> from bicap.capacity import boundary_projection
    >>> proj = boundary_projection(NodeSet([ROOT2]))
    >>> proj.kind, len(proj.materialize(TreeShape(1)))
    ('boundary', 4)

    """
    return NodeSet(target.generators().nodes, kind="boundary")


def disintegrate_to_boundary(mu: Measure, /) -> Measure:
    """Spread every atom uniformly over the boundary vertices below it.

    Uniform is with respect to the dyadic product weight, so an atom at
    ``(j_x, j_y)`` gives ``2**(j_x + j_y - 2L)`` of its mass to each leaf
    pair below it; a coordinate already at the boundary is not spread. Total
    mass is preserved exactly.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, TreeShape
    >>> from bicap.capacity import disintegrate_to_boundary
    >>> from bicap.potential import Measure
    >>> mub = disintegrate_to_boundary(Measure(TreeShape(1), {ROOT2: 1.0}))
    >>> sorted(set(mub.atoms.values())), mub.total()
    ([0.25], 1.0)

    """
    shape = mu.shape
    atoms: list[tuple[AnyNode, float]] = []
    for node, mass in mu.items():
        below = boundary_below(node, shape)
        share = math.ldexp(mass, -(len(below).bit_length() - 1))
        atoms.extend((leaf, share) for leaf in below)
    return Measure(shape, atoms)


def martingale_ratio_check(alpha: Node1, beta: Node1, shape: TreeShape, /) -> float:
    """Average of ``d(xi ∧ omega)`` over leaves below ``alpha`` and ``beta``.

    The leaves are weighted uniformly and the average is divided by
    ``d(alpha ∧ beta)``; the result lies in ``[1, 3]``.

    Examples
    --------
    >>> from bicap.bitree import Node1, TreeShape
    >>> from bicap.capacity import martingale_ratio_check
    >>> martingale_ratio_check(Node1(1, 0), Node1(1, 1), TreeShape(3, ndim=1))
    1.0
    >>> martingale_ratio_check(Node1(0, 0), Node1(0, 0), TreeShape(3, ndim=1))
    1.875

    """
    for node in (alpha, beta):
        if not shape.contains(node):
            msg = f"{node} is not a vertex of {shape}"
            raise ValueError(msg)
    if is_ancestor(alpha, beta):
        alpha, beta = beta, alpha
    if not is_ancestor(beta, alpha):
        # the meet is constant over the leaves below incomparable vertices
        return 1.0
    la, lb, depth = alpha.level, beta.level, shape.depth
    # omega leaves the path of alpha right below level lb + s
    off_path = math.fsum(math.ldexp(lb + s + 1, -(s + 1)) for s in range(la - lb))
    # omega below alpha: xi and omega agree for a geometric number of levels
    tail = la + 1 + math.fsum(math.ldexp(1.0, -t) for t in range(1, depth - la + 1))
    mean = off_path + math.ldexp(tail, -(la - lb))
    return mean / ancestor_count(meet1(alpha, beta))
