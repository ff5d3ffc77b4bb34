"""Layer-by-layer rearrangement of restricted bitree potentials."""

__all__ = [
    "LayerRecord",
    "RearrangementCertificates",
    "RearrangementOutput",
    "rearrange_2d",
    "layer_norm_sum",
]

import logging
import math

import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array

from .one_dim import rearrange_1d
from bicap.bitree import Node1, Node2, NodeSet, TreeShape
from bicap.potential import (
    Measure,
    SparseFunction,
    ancestor_sum,
    coI_dense,
    dense_ok,
    hardy_dense,
    subtree_sum,
)
from bicap.utils import parallel_map

logger = logging.getLogger(__name__)

# Slack on the covering certificate ``I phi >= lambda``.
_COVER_RTOL = 1e-12


class LayerRecord(eqx.Module):
    """Provenance of the layer ``T_x x {alpha_y}``."""

    alpha_y: Node1
    F: NodeSet
    """Leaves of ``T_x`` whose fibre through ``alpha_y`` is heavy."""

    f: SparseFunction
    """``I* mu`` along the layer, restricted to ``E^1``."""

    g: SparseFunction
    """Restricted ``I* mu`` summed over ``y``-ancestors of ``alpha_y``."""

    sigma: Measure
    """One-tree rearrangement of ``f`` on ``F``."""

    norm_sq: float
    """``|I* sigma|^2`` before the global ``3/2`` and ``delta`` factors."""


class RearrangementCertificates(eqx.Module):
    """The two measured guarantees of a bitree rearrangement."""

    hardy_min: float | None
    """``min I phi`` over the exceedance set, `None` when it is empty."""

    norm_sq: float
    bound: float
    """``delta E_delta[mu] / lambda``."""

    constant: float
    """``|phi|^2 / bound`` (zero when the bound vanishes)."""

    covered: bool
    """``I phi >= lambda`` on the whole exceedance set."""


class RearrangementOutput(eqx.Module):
    """A function ``phi`` on the bitree and how it was assembled.

    ``phi`` is ``(3/2) delta`` times the sum of the per-layer functions
    ``I* sigma`` placed on ``T_x x {alpha_y}``; the layers are disjoint.
    """

    phi: SparseFunction
    layers: tuple[LayerRecord, ...]
    exceedance: NodeSet
    """``E_{delta, lambda}``: boundary points where ``V^mu_delta > lambda``."""

    delta: float
    lam: float
    restricted_energy: float
    """``E_delta[mu]``."""

    hardy_min: float | None

    def certificates(self) -> RearrangementCertificates:
        norm_sq = self.phi.norm_sq()
        bound = self.delta * self.restricted_energy / self.lam
        covered = self.hardy_min is None or self.hardy_min >= self.lam * (1 - _COVER_RTOL)
        return RearrangementCertificates(
            hardy_min=self.hardy_min,
            norm_sq=norm_sq,
            bound=bound,
            constant=norm_sq / bound if bound > 0 else 0.0,
            covered=covered,
        )


def _check_input(mu: Measure, delta: float, lam: float) -> None:
    if not delta > 0:
        msg = f"delta must be positive, got {delta}"
        raise ValueError(msg)
    if lam < 9 * delta:
        msg = f"lambda must be at least 9 delta, got lambda={lam}, delta={delta}"
        raise ValueError(msg)
    shape = mu.shape
    if shape.ndim != 2:  # noqa: PLR2004
        msg = "rearrange_2d needs a measure on a bitree"
        raise ValueError(msg)
    if not dense_ok(shape):
        msg = f"{shape} is too large for a dense evaluation"
        raise ValueError(msg)
    for node in mu:
        if not (node.x.level == shape.depth and node.y.level == shape.depth):  # type: ignore[union-attr]
            msg = (
                f"atom at {node} is not on the distinguished boundary; "
                "use disintegrate_to_boundary first"
            )
            raise ValueError(msg)


def rearrange_2d(mu: Measure, delta: float, lam: float, /) -> RearrangementOutput:
    """A low-energy function whose Hardy potential exceeds ``lambda`` on ``E_{delta,lambda}``.

    ``mu`` must live on leaf pairs. The problem is rescaled to ``delta = 1``.
    For every ``alpha_y`` the layer ``T_x x {alpha_y}`` is handled by the
    one-tree rearrangement with parameter ``3 / lambda`` applied to the
    restricted ``I* mu`` along the layer; only layers with a heavy fibre are
    visited. Layers run concurrently and are assembled in heap order.

    Raises
    ------
    ValueError
        If ``delta <= 0``, ``lambda < 9 delta`` or ``mu`` has interior atoms.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape
    >>> from bicap.potential import Measure
    >>> from bicap.rearrangement import rearrange_2d
    >>> leaf = Node2(Node1(2, 0), Node1(2, 0))
    >>> out = rearrange_2d(Measure(TreeShape(2), {leaf: 1 / 9}), 1.0, 9.0)
    >>> out.exceedance.is_empty, out.phi.is_zero
    (True, True)

    """
    _check_input(mu, delta, lam)
    shape = mu.shape
    depth = shape.depth
    tree = TreeShape(depth, ndim=1)
    leaf0 = (1 << depth) - 1
    lam_ = lam / delta

    co = coI_dense(mu.to_dense() / delta, depth=depth)
    restricted = jnp.where(hardy_dense(co, depth=depth) <= 1.0, co, 0.0)
    v1 = hardy_dense(restricted, depth=depth)
    exceed = v1[leaf0:, leaf0:] > lam_

    # fibres (w_x, alpha_y) with some exceedance point below and V_1 > lambda / 3
    hits = jnp.zeros((tree.n_leaves, tree.n_vertices)).at[:, leaf0:].set(exceed.astype(float))
    heavy = (subtree_sum(hits, depth=depth, axis=1) > 0) & (v1[leaf0:, :] > lam_ / 3)
    carried = ancestor_sum(restricted, depth=depth, axis=1)
    active = jnp.nonzero(jnp.any(heavy, axis=0))[0].tolist()

    def layer(j: int) -> tuple[LayerRecord, Array]:
        F = NodeSet(Node1(depth, i) for i in jnp.nonzero(heavy[:, j])[0].tolist())
        f = SparseFunction.from_(tree, restricted[:, j])
        sigma = rearrange_1d(F, f, 3.0 / lam_)
        column = subtree_sum(sigma.to_dense(), depth=depth)
        record = LayerRecord(
            alpha_y=tree.node_at(j),
            F=F,
            f=f,
            g=SparseFunction.from_(tree, carried[:, j]),
            sigma=sigma,
            norm_sq=float(jnp.sum(column * column)),
        )
        logger.debug("layer %s: |F|=%d, |phi|^2=%.6g", record.alpha_y, len(F), record.norm_sq)
        return record, column

    results = parallel_map(layer, active)
    phi = jnp.zeros(shape.dense_shape)
    for j, (_, column) in zip(active, results, strict=True):
        phi = phi.at[:, j].set(1.5 * delta * column)

    hardy_min = None
    if bool(jnp.any(exceed)):
        on_leaves = hardy_dense(phi, depth=depth)[leaf0:, leaf0:]
        hardy_min = float(jnp.min(jnp.where(exceed, on_leaves, jnp.inf)))
    ix, iy = jnp.nonzero(exceed)
    exceedance = NodeSet(
        Node2(Node1(depth, i), Node1(depth, k))
        for i, k in zip(ix.tolist(), iy.tolist(), strict=True)
    )
    out = RearrangementOutput(
        phi=SparseFunction.from_(shape, phi),
        layers=tuple(record for record, _ in results),
        exceedance=exceedance,
        delta=float(delta),
        lam=float(lam),
        restricted_energy=delta**2 * float(jnp.sum(restricted * restricted)),
        hardy_min=hardy_min,
    )
    logger.info(
        "rearrange_2d: delta=%g lambda=%g, %d exceedance points, %d layers, min I phi=%s",
        delta,
        lam,
        len(exceedance),
        len(out.layers),
        "n/a" if hardy_min is None else f"{hardy_min:.6g}",
    )
    return out


def layer_norm_sum(out: RearrangementOutput, /) -> float:
    """``(9/4) delta^2`` times the sum of per-layer norms; equals ``|phi|^2``."""
    return 2.25 * out.delta**2 * math.fsum(rec.norm_sq for rec in out.layers)
