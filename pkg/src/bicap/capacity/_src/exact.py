"""Exact one-tree capacities by the conductance recursion."""

__all__ = ["ExactCapacity", "capacity_tree_exact"]

from collections import defaultdict
from collections.abc import Iterable

import equinox as eqx

from bicap.bitree import ROOT1, Node1, NodeSet, TreeShape
from bicap.potential import Measure


class ExactCapacity(eqx.Module):
    """Capacity and equilibrium measure of a one-tree target."""

    cap: float
    equilibrium: Measure


def capacity_tree_exact(
    shape: TreeShape, target: NodeSet | Iterable[Node1], /
) -> ExactCapacity:
    """Capacity of a set of one-tree vertices by series/parallel reduction.

    Each edge, and the edge above the root, is a unit resistor and target
    vertices are grounded: ``C = 1`` on the target, ``C = S / (1 + S)`` above
    it with ``S`` the sum of the children's conductances, and ``cap = C(o)``.
    The equilibrium mass flows down in proportion to the children's
    conductances, which makes ``V^rho = 1`` on the target exactly.

    Examples
    --------
    >>> from bicap.bitree import Node1, TreeShape
    >>> from bicap.capacity import capacity_tree_exact
    >>> shape = TreeShape(1, ndim=1)
    >>> out = capacity_tree_exact(shape, [Node1(1, 0), Node1(1, 1)])
    >>> round(out.cap, 12), [round(m, 12) for m in out.equilibrium.atoms.values()]
    (0.666666666667, [0.333333333333, 0.333333333333])
    >>> round(capacity_tree_exact(TreeShape(4, ndim=1), [Node1(4, 9)]).cap, 12)
    0.2

    """
    if shape.ndim != 1:
        msg = "the conductance recursion needs a one-tree shape"
        raise ValueError(msg)
    nodes = target if isinstance(target, NodeSet) else NodeSet(target)
    if nodes.kind == "boundary":
        nodes = nodes.materialize(shape)
    grounded = set(nodes.generators())
    if not grounded:
        return ExactCapacity(cap=0.0, equilibrium=Measure(shape, {}))
    for node in grounded:
        if not isinstance(node, Node1) or not shape.contains(node):
            msg = f"{node} is not a vertex of {shape}"
            raise ValueError(msg)

    # bottom-up over the ancestors of the target, deepest level first
    conductance: dict[Node1, float] = {n: 1.0 for n in grounded}  # type: ignore[misc]
    children: dict[Node1, list[Node1]] = defaultdict(list)
    frontier = set(grounded)
    for level in range(max(n.level for n in grounded), 0, -1):  # type: ignore[union-attr]
        at_level = sorted(n for n in frontier if n.level == level)  # type: ignore[union-attr]
        for node in at_level:
            parent = node.parent  # type: ignore[union-attr]
            children[parent].append(node)  # type: ignore[index]
        for parent in sorted({n.parent for n in at_level}):  # type: ignore[union-attr,type-var]
            if parent in conductance:
                continue
            s = sum(conductance[c] for c in children[parent])  # type: ignore[index]
            conductance[parent] = s / (1.0 + s)  # type: ignore[index]
            frontier.add(parent)

    # top-down flux split
    atoms: dict[Node1, float] = {}
    flux = {ROOT1: conductance[ROOT1]}
    queue = [ROOT1]
    while queue:
        node = queue.pop()
        if node in grounded:
            atoms[node] = flux[node]
            continue
        kids = children[node]
        s = sum(conductance[c] for c in kids)
        for c in kids:
            flux[c] = flux[node] * conductance[c] / s
            queue.append(c)
    return ExactCapacity(cap=conductance[ROOT1], equilibrium=Measure(shape, atoms))
