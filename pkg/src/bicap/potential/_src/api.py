"""Hardy operators, potentials and energies of sparse inputs.

Every function works on any depth through vertex arithmetic; where a quantity
needs the whole (bi)tree (restricted potentials, energies of many atoms) the
heap-array operators are used instead when the shape is small enough.

"""

__all__ = [
    "hardy",
    "coI",
    "potential",
    "restricted_potential",
    "level_set_Edelta",
    "restricted_energy",
    "energy",
    "mutual_energy",
    "weighted_adjoint",
    "pairing",
    "coI_function",
    "hardy_function",
    "dense_ok",
]

import math
from typing import Literal

import jax.numpy as jnp
from jaxtyping import Array, Bool
from plum import dispatch

from .fields import AbstractNodeMap, Measure, PotentialField, SparseFunction
from .operators import coI_dense, hardy_dense, potential_dense
from bicap.bitree import (
    AnyNode,
    NodeSet,
    TreeShape,
    common_ancestor_count,
    is_ancestor,
    predecessors,
)

Route = Literal["auto", "atoms", "ancestors", "dense"]

# Largest dense (bi)tree array the "auto" routes will build.
_DENSE_ENTRY_LIMIT = 1 << 21


def dense_ok(shape: TreeShape, /) -> bool:
    """Whether heap arrays over ``shape`` are small enough to build."""
    return shape.depth < 63 and math.prod(shape.dense_shape) <= _DENSE_ENTRY_LIMIT  # noqa: PLR2004


def _require_dense(shape: TreeShape) -> None:
    if not dense_ok(shape):
        msg = f"{shape} is too large for a dense evaluation"
        raise ValueError(msg)


# ===================================================================
# Hardy operator and its adjoint


@dispatch
def hardy(phi: AbstractNodeMap, zeta: AnyNode, /) -> float:
    """Hardy operator ``I phi (zeta)``: the sum of ``phi`` over ``P(zeta)``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape, predecessors
    >>> from bicap.potential import SparseFunction, hardy
    >>> a = Node1(1, 0)
    >>> phi = SparseFunction(TreeShape(1), {n: 0.5 for n in predecessors(Node2(a, a))})
    >>> hardy(phi, Node2(a, a))
    2.0

    """
    return math.fsum(v for node, v in phi.items() if is_ancestor(node, zeta))


@dispatch
def hardy(phi: AbstractNodeMap, nodes: NodeSet, /) -> PotentialField:  # noqa: F811
    return PotentialField(phi.shape, {n: hardy(phi, n) for n in nodes})


@dispatch
def coI(mu: AbstractNodeMap, beta: AnyNode, /) -> float:
    """Adjoint Hardy operator ``I* mu (beta) = mu(S(beta))``.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, Node1, Node2, TreeShape
    >>> from bicap.potential import Measure, coI
    >>> a, b = Node1(1, 0), Node1(1, 1)
    >>> mu = Measure(TreeShape(1), {Node2(a, a): 1.0, Node2(b, a): 2.0})
    >>> coI(mu, ROOT2), coI(mu, Node2(a, Node1(0, 0)))
    (3.0, 1.0)

    """
    return math.fsum(m for node, m in mu.items() if is_ancestor(beta, node))


@dispatch
def coI(mu: AbstractNodeMap, nodes: NodeSet, /) -> PotentialField:  # noqa: F811
    return PotentialField(mu.shape, {n: coI(mu, n) for n in nodes})


def coI_function(mu: AbstractNodeMap, /) -> SparseFunction:
    """``I* mu`` over the whole (bi)tree as a `SparseFunction`."""
    _require_dense(mu.shape)
    return SparseFunction.from_(mu.shape, coI_dense(mu.to_dense(), depth=mu.shape.depth))


def hardy_function(phi: AbstractNodeMap, /) -> SparseFunction:
    """``I phi`` over the whole (bi)tree as a `SparseFunction`."""
    _require_dense(phi.shape)
    return SparseFunction.from_(
        phi.shape, hardy_dense(phi.to_dense(), depth=phi.shape.depth)
    )


# ===================================================================
# Potentials


@dispatch
def potential(
    mu: AbstractNodeMap, alpha: AnyNode, /, *, route: Route = "atoms"
) -> float:
    """Potential ``V^mu(alpha)``.

    ``route="atoms"`` evaluates ``sum d(alpha ∧ atom) mass`` and works at any
    depth; ``route="ancestors"`` sums ``I* mu`` over ``P(alpha)``.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, Node1, Node2, TreeShape
    >>> from bicap.potential import Measure, potential
    >>> shape = TreeShape(1)
    >>> corners = shape.leaves()
    >>> mu = Measure(shape, {c: 1 / 9 for c in corners})
    >>> round(potential(mu, corners[0]), 12)
    1.0
    >>> chi = Measure(shape, {ROOT2: 1.0})
    >>> potential(chi, corners[3]), potential(chi, corners[3], route="ancestors")
    (1.0, 1.0)

    """
    if route in ("atoms", "auto"):
        return math.fsum(m * common_ancestor_count(alpha, node) for node, m in mu.items())
    if route == "ancestors":
        return math.fsum(coI(mu, beta) for beta in predecessors(alpha))
    if route == "dense":
        return potential(mu, NodeSet([alpha]), route="dense")[alpha]
    msg = f"unknown route {route!r}"
    raise ValueError(msg)


@dispatch
def potential(  # noqa: F811
    mu: AbstractNodeMap, nodes: NodeSet, /, *, route: Route = "auto"
) -> PotentialField:
    """Potential at every vertex of an (exact) node set."""
    if route == "dense" or (route == "auto" and dense_ok(mu.shape)):
        _require_dense(mu.shape)
        dense = potential_dense(mu.to_dense(), depth=mu.shape.depth)
        return PotentialField(mu.shape, _gather(dense, mu.shape, nodes))
    sparse_route: Route = "atoms" if route == "auto" else route
    return PotentialField(
        mu.shape, {n: potential(mu, n, route=sparse_route) for n in nodes}
    )


def _gather(dense: Array, shape: TreeShape, nodes: NodeSet) -> dict[AnyNode, float]:
    hi = shape.heap_index
    if not nodes:
        return {}
    if shape.ndim == 2:  # noqa: PLR2004
        ix = jnp.asarray([hi(n.x) for n in nodes])  # type: ignore[union-attr]
        iy = jnp.asarray([hi(n.y) for n in nodes])  # type: ignore[union-attr]
        values = dense[ix, iy].tolist()
    else:
        values = dense[jnp.asarray([hi(n) for n in nodes])].tolist()  # type: ignore[arg-type]
    return dict(zip(nodes, values, strict=True))


# ===================================================================
# Restricted potentials


def _restricted_mask(mu: AbstractNodeMap, delta: float) -> tuple[Array, Bool[Array, "..."]]:
    if not delta > 0:
        msg = f"delta must be positive, got {delta}"
        raise ValueError(msg)
    _require_dense(mu.shape)
    co = coI_dense(mu.to_dense(), depth=mu.shape.depth)
    pot = hardy_dense(co, depth=mu.shape.depth)
    return co, pot <= delta


def level_set_Edelta(mu: AbstractNodeMap, delta: float, /) -> NodeSet:
    """``E^delta = {alpha : V^mu(alpha) <= delta}``, stored exactly.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, TreeShape
    >>> from bicap.potential import Measure, level_set_Edelta
    >>> level_set_Edelta(Measure(TreeShape(1), {ROOT2: 1.0}), 0.5).is_empty
    True

    """
    _, mask = _restricted_mask(mu, delta)
    marks = Measure.from_(mu.shape, mask.astype(float))
    return NodeSet(marks.data.keys())


@dispatch
def restricted_potential(
    mu: AbstractNodeMap, delta: float | int, alpha: AnyNode, /
) -> float:
    """``V^mu_delta(alpha)``: ``I* mu`` summed over ``P(alpha) ∩ E^delta``.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, Node1, Node2, TreeShape
    >>> from bicap.potential import Measure, restricted_potential
    >>> a = Node1(1, 0)
    >>> mu = Measure(TreeShape(1), {Node2(a, a): 0.25})
    >>> restricted_potential(mu, 0.25, ROOT2)
    0.25

    """
    return restricted_potential(mu, delta, NodeSet([alpha]))[alpha]


@dispatch
def restricted_potential(  # noqa: F811
    mu: AbstractNodeMap, delta: float | int, nodes: NodeSet, /
) -> PotentialField:
    co, mask = _restricted_mask(mu, float(delta))
    dense = hardy_dense(jnp.where(mask, co, 0.0), depth=mu.shape.depth)
    return PotentialField(mu.shape, _gather(dense, mu.shape, nodes))


def restricted_energy(mu: AbstractNodeMap, delta: float, /) -> float:
    """``E_delta[mu]``: sum of ``(I* mu)^2`` over ``E^delta``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape
    >>> from bicap.potential import Measure, restricted_energy
    >>> a = Node1(1, 0)
    >>> restricted_energy(Measure(TreeShape(1), {Node2(a, a): 0.25}), 0.25)
    0.0625

    """
    co, mask = _restricted_mask(mu, delta)
    return float(jnp.sum(jnp.where(mask, co * co, 0.0)))


# ===================================================================
# Energies


def mutual_energy(mu: AbstractNodeMap, nu: AbstractNodeMap, /, *, route: Route = "auto") -> float:
    """``E[mu, nu] = sum over all vertices of I* mu · I* nu``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape
    >>> from bicap.potential import Measure, mutual_energy
    >>> a, b = Node1(1, 0), Node1(1, 1)
    >>> shape = TreeShape(1)
    >>> mutual_energy(Measure(shape, {Node2(a, a): 1.0}), Measure(shape, {Node2(b, b): 1.0}))
    1.0

    """
    if mu.shape != nu.shape:
        msg = f"shape mismatch: {mu.shape} vs {nu.shape}"
        raise ValueError(msg)
    if route == "dense" or (route == "auto" and dense_ok(mu.shape)):
        _require_dense(mu.shape)
        depth = mu.shape.depth
        co_mu = coI_dense(mu.to_dense(), depth=depth)
        co_nu = co_mu if nu is mu else coI_dense(nu.to_dense(), depth=depth)
        return float(jnp.sum(co_mu * co_nu))
    if route in ("auto", "atoms"):
        return math.fsum(
            m * n * common_ancestor_count(a, b)
            for a, m in mu.items()
            for b, n in nu.items()
        )
    if route == "ancestors":
        return math.fsum(m * potential(mu, b, route="ancestors") for b, m in nu.items())
    msg = f"unknown route {route!r}"
    raise ValueError(msg)


def energy(mu: AbstractNodeMap, /, *, route: Route = "auto") -> float:
    """``E[mu] = |I* mu|^2 = integral of V^mu dmu``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape
    >>> from bicap.potential import Measure, energy
    >>> a = Node1(1, 0)
    >>> mu = Measure(TreeShape(1), {Node2(a, a): 1.0})
    >>> energy(mu), energy(mu, route="atoms")
    (4.0, 4.0)

    """
    return mutual_energy(mu, mu, route=route)


# ===================================================================
# Weighted adjoint and pairings


@dispatch
def weighted_adjoint(
    phi: AbstractNodeMap, nu: AbstractNodeMap, beta: AnyNode, /
) -> float:
    """``I*_nu phi (beta)``: the ``nu``-integral of ``phi`` over ``S(beta)``.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, Node1, Node2, TreeShape
    >>> from bicap.potential import Measure, SparseFunction, weighted_adjoint
    >>> shape = TreeShape(1)
    >>> a = Node1(1, 0)
    >>> nu = Measure(shape, {Node2(a, a): 2.0, ROOT2: 1.0})
    >>> one = SparseFunction(shape, {n: 1.0 for n in shape.nodes()})
    >>> weighted_adjoint(one, nu, ROOT2)
    3.0

    """
    return math.fsum(
        phi[node] * m for node, m in nu.items() if is_ancestor(beta, node)
    )


@dispatch
def weighted_adjoint(  # noqa: F811
    phi: AbstractNodeMap, nu: AbstractNodeMap, nodes: NodeSet, /
) -> PotentialField:
    return PotentialField(nu.shape, {n: weighted_adjoint(phi, nu, n) for n in nodes})


def pairing(f: AbstractNodeMap, mu: AbstractNodeMap, /) -> tuple[float, float]:
    """Both sides of ``integral of I f dmu = sum of f · I* mu``.

    Returns
    -------
    tuple[float, float]
        ``(sum over atoms of I f · mass, sum over vertices of f · I* mu)``.
    """
    left = math.fsum(
        m * math.fsum(v for node, v in f.items() if is_ancestor(node, atom))
        for atom, m in mu.items()
    )
    right = math.fsum(v * coI(mu, node) for node, v in f.items())
    return left, right
