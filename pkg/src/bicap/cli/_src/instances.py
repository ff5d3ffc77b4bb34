"""Seeded random instances for the experiment suites.

Instance ``i`` of a run with seed ``s`` is drawn from
``jax.random.fold_in(jax.random.key(s), i)``, so any single instance can be
regenerated without replaying the ones before it.
"""

__all__ = [
    "instance_key",
    "random_node1",
    "random_node2",
    "random_leaf_set",
    "random_box_union",
    "random_boundary_measure",
    "random_measure",
    "random_function",
    "random_superharmonic",
]

import jax.random as jr
from jaxtyping import PRNGKeyArray

from bicap.bitree import Node1, Node2, NodeSet, TreeShape
from bicap.potential import Measure, SparseFunction

_POS_BITS = 30


def instance_key(seed: int, index: int, /) -> PRNGKeyArray:
    return jr.fold_in(jr.key(seed), index)


def _ints(key: PRNGKeyArray, count: int, high: int) -> list[int]:
    return jr.randint(key, (count,), 0, high).tolist()


def random_node1(key: PRNGKeyArray, depth: int, /, *, level: int | None = None) -> Node1:
    """A vertex at a uniform level; below level 30 only the top 30 position bits vary."""
    k_level, k_pos = jr.split(key)
    if level is None:
        level = int(jr.randint(k_level, (), 0, depth + 1))
    bits = min(level, _POS_BITS)
    pos = int(jr.randint(k_pos, (), 0, 1 << bits))
    return Node1(level, pos << (level - bits))


def random_node2(key: PRNGKeyArray, depth: int, /) -> Node2:
    kx, ky = jr.split(key)
    return Node2(random_node1(kx, depth), random_node1(ky, depth))


def random_leaf_set(key: PRNGKeyArray, depth: int, /, *, max_size: int = 6) -> NodeSet:
    """Distinct leaves of ``T`` of depth ``depth``, at least one."""
    k_size, k_pos = jr.split(key)
    size = int(jr.randint(k_size, (), 1, max_size + 1))
    pos = _ints(k_pos, size, 1 << depth)
    return NodeSet([Node1(depth, p) for p in sorted(set(pos))])


def random_box_union(key: PRNGKeyArray, depth: int, /, *, max_size: int = 3) -> NodeSet:
    """A union of boundary boxes below random bitree vertices."""
    k_size, *keys = jr.split(key, max_size + 1)
    size = int(jr.randint(k_size, (), 1, max_size + 1))
    return NodeSet([random_node2(k, depth) for k in keys[:size]], kind="boundary")


def random_boundary_measure(
    key: PRNGKeyArray, depth: int, /, *, count: int = 8, total: float = 1.0
) -> Measure:
    """``count`` atoms on leaf pairs with uniform masses, scaled to ``total``."""
    kx, ky, km = jr.split(key, 3)
    xs = _ints(kx, count, 1 << depth)
    ys = _ints(ky, count, 1 << depth)
    masses = (1.0 - jr.uniform(km, (count,))).tolist()
    scale = total / sum(masses)
    return Measure(
        TreeShape(depth),
        [
            (Node2(Node1(depth, x), Node1(depth, y)), m * scale)
            for x, y, m in zip(xs, ys, masses, strict=True)
        ],
    )


def random_measure(
    key: PRNGKeyArray, shape: TreeShape, /, *, count: int = 6
) -> Measure:
    """Atoms at uniformly random vertices of ``shape`` with masses in ``(0, 1]``."""
    k_nodes, k_mass = jr.split(key)
    draw = random_node1 if shape.ndim == 1 else random_node2
    nodes = [draw(k, shape.depth) for k in jr.split(k_nodes, count)]
    masses = (1.0 - jr.uniform(k_mass, (count,))).tolist()
    return Measure(shape, list(zip(nodes, masses, strict=True)))


def random_function(
    key: PRNGKeyArray, shape: TreeShape, /, *, count: int = 4
) -> SparseFunction:
    """A non-negative function with up to ``count`` non-zero values."""
    k_nodes, k_vals = jr.split(key)
    draw = random_node1 if shape.ndim == 1 else random_node2
    nodes = [draw(k, shape.depth) for k in jr.split(k_nodes, count)]
    values = (1.0 - jr.uniform(k_vals, (count,))).tolist()
    return SparseFunction(shape, list(zip(nodes, values, strict=True)))


def random_superharmonic(
    key: PRNGKeyArray, depth: int, /, *, p_stop: float = 0.3
) -> SparseFunction:
    """A superharmonic function on ``T``: children share at most their parent's value.

    Each child independently drops out with probability ``p_stop``, which
    keeps the support sparse.
    """
    values: dict[Node1, float] = {Node1(0, 0): 1.0}
    frontier = [Node1(0, 0)]
    for _ in range(depth):
        key, k_share, k_split, k_stop = jr.split(key, 4)
        n = len(frontier)
        if n == 0:
            break
        share = jr.uniform(k_share, (n,)).tolist()
        split = jr.uniform(k_split, (n,)).tolist()
        stop = (jr.uniform(k_stop, (n, 2)) < p_stop).tolist()
        nxt: list[Node1] = []
        for node, s, t, (stop_l, stop_r) in zip(frontier, share, split, stop, strict=True):
            parent = values[node]
            left, right = node.children
            for child, part, dropped in ((left, t, stop_l), (right, 1.0 - t, stop_r)):
                if dropped or part * s == 0:
                    continue
                values[child] = parent * s * part
                nxt.append(child)
        frontier = nxt
    return SparseFunction(TreeShape(depth, ndim=1), values)
