"""Stopping sets and the one-tree rearrangement of an equilibrium measure."""

__all__ = [
    "StoppingSet",
    "stopping_set",
    "rearrange_1d",
    "OneDimCertificate",
    "certify_1d",
]

import logging
import math

import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, Bool
from xmmutablemap import ImmutableMap

from bicap.bitree import Node1, NodeSet, TreeShape
from bicap.capacity import capacity_tree_exact
from bicap.potential import (
    AbstractNodeMap,
    Measure,
    SparseFunction,
    ancestor_sum,
    coI_dense,
    dense_ok,
    energy,
    hardy_dense,
    parent_mask,
    potential_dense,
)
from bicap.utils.exceptions import HypothesisError

logger = logging.getLogger(__name__)

# Relative slack on the hypothesis V^rho <= delta on supp f.
_HYPOTHESIS_RTOL = 1e-9


def _require_tree(shape: TreeShape) -> None:
    if shape.ndim != 1:
        msg = "the one-tree rearrangement needs a one-tree shape"
        raise ValueError(msg)
    if not dense_ok(shape):
        msg = f"{shape} is too large for a dense evaluation"
        raise ValueError(msg)


def _leaf_set(target: NodeSet, shape: TreeShape) -> NodeSet:
    leaves = target
    if target.kind != "exact":
        leaves = NodeSet(target.nodes, kind="boundary").materialize(shape)
    for node in leaves:
        if not (isinstance(node, Node1) and shape.contains(node) and shape.is_leaf(node)):
            msg = f"{node} is not a leaf of {shape}"
            raise ValueError(msg)
    return leaves


class StoppingSet(eqx.Module):
    """First vertices on each path where ``V^rho`` exceeds ``delta``.

    ``nodes`` is an antichain; ``values`` holds ``V^rho`` at its members.

    Examples
    --------
    >>> from bicap.bitree import Node1, TreeShape
    >>> from bicap.potential import Measure
    >>> from bicap.rearrangement import stopping_set
    >>> rho = Measure(TreeShape(2, ndim=1), {Node1(2, 0): 1 / 3})
    >>> stop = stopping_set(rho, 1 / 3)
    >>> stop.nodes.nodes
    (Node1(level=1, pos=0),)
    >>> stop.sandwich_holds()
    True

    """

    nodes: NodeSet
    values: ImmutableMap[Node1, float] = eqx.field(converter=ImmutableMap)
    delta: float

    def sandwich_holds(self, *, rtol: float = 1e-12) -> bool:
        """``delta < V^rho(beta) <= 2 delta`` at every non-root member."""
        return all(
            self.delta < v <= 2 * self.delta * (1 + rtol)
            for node, v in self.values.items()
            if not node.is_root
        )


def _stopping_mask(pot: Array, delta: float) -> Bool[Array, "N"]:
    above = pot > delta
    return above & ~parent_mask(above)


def stopping_set(rho: Measure, delta: float, /) -> StoppingSet:
    """The stopping set of ``V^rho`` at level ``delta``."""
    _require_tree(rho.shape)
    pot = potential_dense(rho.to_dense(), depth=rho.shape.depth)
    marks = SparseFunction.from_(rho.shape, _stopping_mask(pot, delta).astype(float))
    nodes = marks.support()
    hi = rho.shape.heap_index
    values = {n: float(pot[hi(n)]) for n in nodes}  # type: ignore[arg-type]
    return StoppingSet(nodes, values, float(delta))


def rearrange_1d(F: NodeSet, f: AbstractNodeMap, delta: float, /) -> Measure:
    """A measure on ``F`` whose potential dominates ``I f`` there, at low energy.

    ``rho`` is the equilibrium measure of the leaf set ``F``. On each piece
    ``S(beta)`` cut out by the stopping set of ``V^rho`` at ``delta``, ``rho``
    is scaled by ``(I f)(beta)``; the sum is divided by ``1 - 2 delta``. The
    hypothesis ``V^rho <= delta`` on ``supp f`` is checked.

    Raises
    ------
    ValueError
        If ``delta`` is not in ``(0, 1/3]`` or ``F`` is not a set of leaves.
    HypothesisError
        If ``V^rho > delta`` somewhere on ``supp f``.

    Examples
    --------
    >>> from bicap.bitree import Node1, NodeSet, TreeShape
    >>> from bicap.potential import SparseFunction
    >>> from bicap.rearrangement import rearrange_1d
    >>> shape = TreeShape(2, ndim=1)
    >>> F = NodeSet([Node1(2, 0)])
    >>> sigma = rearrange_1d(F, SparseFunction(shape, {Node1(0, 0): 1.0}), 1 / 3)
    >>> round(sigma[Node1(2, 0)], 12)
    1.0

    """
    if not 0 < delta <= 1 / 3:
        msg = f"delta must be in (0, 1/3], got {delta}"
        raise ValueError(msg)
    shape = f.shape
    _require_tree(shape)
    leaves = _leaf_set(F, shape)
    if f.is_zero or leaves.is_empty:
        return Measure(shape, {})

    depth = shape.depth
    rho = capacity_tree_exact(shape, leaves).equilibrium.to_dense()
    pot = potential_dense(rho, depth=depth)
    f_dense = f.to_dense()
    worst = float(jnp.max(jnp.where(f_dense > 0, pot, -jnp.inf)))
    if worst > delta * (1 + _HYPOTHESIS_RTOL):
        msg = f"V^rho reaches {worst} > delta = {delta} on supp f"
        raise HypothesisError(msg)

    stop = _stopping_mask(pot, delta)
    weight = ancestor_sum(jnp.where(stop, hardy_dense(f_dense, depth=depth), 0.0), depth=depth)
    sigma = Measure.from_(shape, rho * weight / (1.0 - 2.0 * delta))
    logger.debug(
        "rearrange_1d: |F|=%d, %d stopping vertices, |sigma|=%.6g",
        len(leaves),
        int(jnp.sum(stop)),
        sigma.total(),
    )
    return sigma


class OneDimCertificate(eqx.Module):
    """Measured guarantees of a one-tree rearrangement."""

    margin: float
    """``min over F of V^sigma - I f`` (non-negative when the domination holds)."""

    energy: float
    """``E[sigma]``."""

    constant: float
    """``E[sigma] / (delta |f|^2)``, zero for ``f = 0``."""

    piece_min: float
    """``min over F of V^{rho_beta}(omega)``; at least ``1 - 2 delta``."""

    def holds(self, *, atol: float = 1e-12) -> bool:
        return self.margin >= -atol


def certify_1d(F: NodeSet, f: AbstractNodeMap, sigma: Measure, delta: float, /) -> OneDimCertificate:
    """Evaluate the guarantees of :func:`rearrange_1d` directly.

    Examples
    --------
    >>> from bicap.bitree import Node1, NodeSet, TreeShape
    >>> from bicap.potential import SparseFunction
    >>> from bicap.rearrangement import certify_1d, rearrange_1d
    >>> shape = TreeShape(2, ndim=1)
    >>> F, f = NodeSet([Node1(2, 0)]), SparseFunction(shape, {Node1(0, 0): 1.0})
    >>> cert = certify_1d(F, f, rearrange_1d(F, f, 1 / 3), 1 / 3)
    >>> cert.holds(), round(cert.margin, 9), round(cert.constant, 9)
    (True, 2.0, 9.0)

    """
    shape = f.shape
    _require_tree(shape)
    leaves = _leaf_set(F, shape)
    if leaves.is_empty:
        return OneDimCertificate(margin=0.0, energy=energy(sigma), constant=0.0, piece_min=1.0)
    depth = shape.depth
    hi = shape.heap_index
    index = jnp.asarray([hi(n) for n in leaves])  # type: ignore[arg-type]

    v_sigma = potential_dense(sigma.to_dense(), depth=depth)
    hardy_f = hardy_dense(f.to_dense(), depth=depth)
    margin = float(jnp.min(v_sigma[index] - hardy_f[index]))

    # V^{rho_beta}(w) = V^rho(w) - V^rho(beta) + (level(beta) + 1) I* rho(beta)
    rho = capacity_tree_exact(shape, leaves).equilibrium.to_dense()
    co = coI_dense(rho, depth=depth)
    pot = hardy_dense(co, depth=depth)
    stop = _stopping_mask(pot, delta)
    levels = jnp.floor(jnp.log2(jnp.arange(1, co.shape[0] + 1))).astype(float)
    offset = jnp.where(stop, (levels + 1.0) * co - pot, 0.0)
    piece = pot + ancestor_sum(offset, depth=depth)
    covered = ancestor_sum(stop.astype(float), depth=depth)[index] > 0
    piece_min = float(jnp.min(jnp.where(covered, piece[index], jnp.inf)))

    e_sigma = energy(sigma)
    norm = f.norm_sq()
    constant = e_sigma / (delta * norm) if norm > 0 else 0.0
    return OneDimCertificate(
        margin=margin,
        energy=e_sigma,
        constant=constant,
        piece_min=piece_min if math.isfinite(piece_min) else 1.0,
    )
