"""How far an equilibrium potential overshoots its support bound."""

__all__ = ["MaxPrincipleReport", "quantitative_max_principle"]

import logging
from collections.abc import Iterable, Mapping
from typing import Any

import equinox as eqx
import jax.numpy as jnp

from bicap.bitree import AnyNode, Node1, Node2, NodeSet, TreeShape
from bicap.capacity import AbstractCapacitySolver, capacity
from bicap.potential import dense_ok, potential_dense

logger = logging.getLogger(__name__)


class MaxPrincipleReport(eqx.Module):
    """Exceedance set of ``V^{mu_E}`` at level ``lambda`` and its capacity."""

    lam: float
    cap_e: float
    exceedance: NodeSet
    """``E_lambda``: boundary points where ``V^{mu_E} > lambda``."""

    cap_exceedance: float
    max_potential: float
    """``max V^{mu_E}`` over the boundary."""

    certified: bool

    @property
    def scaled_ratio(self) -> float:
        """``lambda**3 cap E_lambda / cap E``."""
        return self.lam**3 * self.cap_exceedance / self.cap_e


def quantitative_max_principle(
    shape: TreeShape,
    target: NodeSet | Iterable[AnyNode],
    lam: float,
    /,
    *,
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
) -> MaxPrincipleReport:
    """Capacity of the boundary set where the equilibrium potential of ``E`` exceeds ``lambda``.

    Raises
    ------
    ValueError
        If ``lambda <= 1``, ``cap E = 0`` or the shape is too large for dense
        potentials.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape
    >>> from bicap.rearrangement import quantitative_max_principle
    >>> shape = TreeShape(3)
    >>> stairs = [Node2(Node1(3, 0), Node1(0, 0)), Node2(Node1(1, 0), Node1(1, 0)),
    ...           Node2(Node1(0, 0), Node1(3, 0))]
    >>> rep = quantitative_max_principle(shape, stairs, 1.6)
    >>> round(rep.cap_e, 6), round(rep.max_potential, 6)
    (0.416667, 1.666667)
    >>> rep.exceedance.nodes
    (Node2(x=Node1(level=3, pos=0), y=Node1(level=3, pos=0)),)

    """
    if not lam > 1:
        msg = f"lambda must exceed 1, got {lam}"
        raise ValueError(msg)
    if shape.ndim != 2 or not dense_ok(shape):  # noqa: PLR2004
        msg = f"{shape} is not a bitree small enough for dense potentials"
        raise ValueError(msg)
    target_ = target if isinstance(target, NodeSet) else NodeSet(target)
    result = capacity(shape, target_, solver=solver)
    if not result.cap > 0:
        msg = "the target has zero capacity"
        raise ValueError(msg)

    depth = shape.depth
    leaf0 = (1 << depth) - 1
    pot = potential_dense(result.equilibrium.to_dense(), depth=depth)[leaf0:, leaf0:]
    ix, iy = jnp.nonzero(pot > lam)
    exceedance = NodeSet(
        Node2(Node1(depth, i), Node1(depth, k))
        for i, k in zip(ix.tolist(), iy.tolist(), strict=True)
    )
    certified = result.certified
    cap_exceedance = 0.0
    if not exceedance.is_empty:
        sub = capacity(shape, exceedance, solver=solver)
        cap_exceedance = sub.cap
        certified = certified and sub.certified

    report = MaxPrincipleReport(
        lam=float(lam),
        cap_e=result.cap,
        exceedance=exceedance,
        cap_exceedance=cap_exceedance,
        max_potential=float(jnp.max(pot)),
        certified=certified,
    )
    logger.info(
        "max principle: lambda=%g, cap E=%.6g, |E_lambda|=%d, cap E_lambda=%.6g",
        lam,
        report.cap_e,
        len(exceedance),
        cap_exceedance,
    )
    return report
