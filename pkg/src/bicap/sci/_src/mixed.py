"""Mixed-energy and diagonal-domination estimates for equilibrium measures."""

__all__ = [
    "MixedEnergyReport",
    "mixed_energy_check",
    "DiagonalReport",
    "diagonal_domination_check",
]

import logging
import math
import warnings
from collections.abc import Mapping, Sequence
from typing import Any

import equinox as eqx
from plum import dispatch

from .levelsets import LevelSetFamily
from bicap.bitree import AnyNode, Node2, NodeSet, TreeShape
from bicap.capacity import AbstractCapacitySolver, CapacityResult, capacity
from bicap.potential import mutual_energy
from bicap.utils import parallel_map
from bicap.utils.exceptions import BicapWarning

logger = logging.getLogger(__name__)


class MixedEnergyReport(eqx.Module):
    """``E[mu_E, mu_F]`` against ``(cap E)**(1/3) (cap F)**(2/3)``."""

    lhs: float
    rhs: float
    cap_e: float
    cap_f: float
    swapped: bool
    """Whether the inputs were reordered so that ``cap F <= cap E``."""

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs if self.rhs > 0 else 0.0


def mixed_energy_check(
    shape: TreeShape,
    e: NodeSet,
    f: NodeSet,
    /,
    *,
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
) -> MixedEnergyReport:
    """Compare the mutual energy of two equilibrium measures with their capacities.

    ``e`` and ``f`` are boundary sets (or exact sets of boundary vertices). When
    ``cap F > cap E`` the two are swapped with a `BicapWarning`.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, NodeSet, TreeShape
    >>> from bicap.sci import mixed_energy_check
    >>> corners = NodeSet([ROOT2], kind="boundary")
    >>> round(mixed_energy_check(TreeShape(1), corners, corners).ratio, 9)
    1.0

    """
    for s in (e, f):
        bad = [n for n in s if s.kind != "boundary" and not _on_boundary(n, shape)]
        if bad:
            msg = f"mixed energies need boundary sets, got {bad[0]}"
            raise ValueError(msg)
    res_e, res_f = parallel_map(lambda s: capacity(shape, s, solver=solver), [e, f])
    swapped = res_f.cap > res_e.cap
    if swapped:
        warnings.warn("cap F > cap E; swapping the two sets", BicapWarning, stacklevel=2)
        res_e, res_f = res_f, res_e
    if res_f.equilibrium.is_zero:
        lhs = 0.0
    else:
        lhs = mutual_energy(res_e.equilibrium, res_f.equilibrium)
    rhs = res_e.cap ** (1 / 3) * res_f.cap ** (2 / 3)
    return MixedEnergyReport(
        lhs=lhs, rhs=rhs, cap_e=res_e.cap, cap_f=res_f.cap, swapped=swapped
    )


def _on_boundary(node: AnyNode, shape: TreeShape) -> bool:
    if isinstance(node, Node2):
        return node.x.level == shape.depth and node.y.level == shape.depth
    return node.level == shape.depth


class DiagonalReport(eqx.Module):
    """Double sum over nested levels against its diagonal."""

    offdiag: float
    """``sum_k sum_{j <= k} 2**(j + k) E[mu_k, mu_j]``."""

    diag: float
    """``sum_k 4**k cap E_k``."""

    @property
    def ratio(self) -> float:
        return self.offdiag / self.diag if self.diag > 0 else 1.0


@dispatch
def diagonal_domination_check(
    shape: TreeShape,
    sets: Sequence[NodeSet],
    ks: Sequence[int],
    /,
    *,
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
) -> DiagonalReport:
    """Check that the level double sum is dominated by its diagonal.

    ``sets[i]`` is the level ``ks[i]``; the sets must be nested, decreasing
    with ``k``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, NodeSet, TreeShape
    >>> from bicap.sci import diagonal_domination_check
    >>> o, a = Node1(0, 0), Node1(1, 0)
    >>> outer, inner = NodeSet([Node2(o, a)]), NodeSet([Node2(a, a)])
    >>> rep = diagonal_domination_check(TreeShape(1), [outer, inner], [0, 1])
    >>> round(rep.offdiag, 9), round(rep.diag, 9)
    (2.0, 1.5)

    """
    if len(sets) != len(ks):
        msg = f"got {len(sets)} sets for {len(ks)} levels"
        raise ValueError(msg)
    order = sorted(range(len(ks)), key=lambda i: ks[i])
    sets = [sets[i] for i in order]
    ks = [ks[i] for i in order]
    for outer, inner in zip(sets, sets[1:], strict=False):
        if not _nested(outer, inner, shape):
            msg = "level sets must be nested, decreasing in k"
            raise ValueError(msg)

    results: list[CapacityResult] = parallel_map(
        lambda s: capacity(shape, s, solver=solver), sets
    )
    diag = math.fsum(math.ldexp(r.cap, 2 * k) for k, r in zip(ks, results, strict=True))
    terms = []
    for i, (k, rk) in enumerate(zip(ks, results, strict=True)):
        for j in range(i + 1):
            rj = results[j]
            if rk.equilibrium.is_zero or rj.equilibrium.is_zero:
                continue
            pair = rk.cap if i == j else mutual_energy(rk.equilibrium, rj.equilibrium)
            terms.append(math.ldexp(pair, ks[j] + k))
    offdiag = math.fsum(terms)
    logger.info("diagonal domination: offdiag=%.12g diag=%.12g", offdiag, diag)
    return DiagonalReport(offdiag=offdiag, diag=diag)


@dispatch
def diagonal_domination_check(  # noqa: F811
    family: LevelSetFamily,
    /,
    *,
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
) -> DiagonalReport:
    return diagonal_domination_check(
        family.shape, [lv.boundary for lv in family], list(family.ks), solver=solver
    )


def _nested(outer: NodeSet, inner: NodeSet, shape: TreeShape) -> bool:
    """``inner ⊆ outer``, boundary sets compared by their leaves."""
    if "boundary" in (outer.kind, inner.kind):
        cover = NodeSet(outer.nodes, kind="boundary")
        leaves = NodeSet(inner.nodes, kind="boundary").materialize(shape)
        return all(cover.contains(n, shape) for n in leaves)
    down = NodeSet(outer.nodes, kind="downset")
    return all(down.contains(n) for n in inner)
