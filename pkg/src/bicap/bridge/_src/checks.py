"""Comparisons between the bidisc and its bitree model."""

__all__ = [
    "KernelComparison",
    "kernel_vs_tree_check",
    "CarlesonReport",
    "carleson_test",
]

import cmath
import logging
import math
from collections.abc import Iterable, Mapping, Sequence
from typing import Any

import equinox as eqx

from .points import BidiscAtom, node_of_point, pullback_measure
from bicap.bitree import TreeShape, g_ancestor_count
from bicap.capacity import AbstractCapacitySolver
from bicap.potential import trace_norm_estimate
from bicap.sci import (
    SubcapResult,
    SubcapStrategy,
    TraceCheck,
    subcap_constant,
    trace_upper_bound_check,
)

logger = logging.getLogger(__name__)

# Additive constant making the logarithmic kernel positive and comparable.
_KERNEL_SHIFT = 10.0


class KernelComparison(eqx.Module):
    """The bidisc kernel and the graph meet count at a pair of points."""

    kernel: float
    """``prod_i |10 + log(1 / (1 - conj(z_i) w_i))|``; infinite on the diagonal of the torus."""

    tree: int
    """``prod_i d_G(alpha_i ∧ beta_i)`` for the assigned vertices."""

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.kernel)

    @property
    def ratio(self) -> float:
        return self.kernel / self.tree


def _log_factor(z: complex, w: complex) -> float:
    denom = 1 - z.conjugate() * w
    if denom == 0:
        return math.inf
    return abs(_KERNEL_SHIFT - cmath.log(denom))


def kernel_vs_tree_check(z: BidiscAtom, w: BidiscAtom, depth: int, /) -> KernelComparison:
    """Compare the bidisc kernel at ``(z, w)`` with ``d_G`` of their vertices.

    Only the coordinates of ``z`` and ``w`` are read; masses are ignored.

    Examples
    --------
    >>> from bicap.bridge import BidiscAtom, kernel_vs_tree_check
    >>> o = BidiscAtom((0, 0), (0, 0), 1.0)
    >>> cmp = kernel_vs_tree_check(o, o, 4)
    >>> cmp.kernel, cmp.tree, round(cmp.ratio, 6)
    (100.0, 9, 11.111111)

    """
    tree = TreeShape(depth, ndim=1)
    kernel = 1.0
    count = 1
    for a, b in ((z.z1, w.z1), (z.z2, w.z2)):
        kernel *= _log_factor(cmath.rect(*a), cmath.rect(*b))
        count *= g_ancestor_count(node_of_point(a, depth), node_of_point(b, depth), tree)
    return KernelComparison(kernel=kernel, tree=count)


class CarlesonReport(eqx.Module):
    """Embedding and capacitary constants of one pulled-back measure."""

    depth: int
    total_mass: float
    norm_sq: float
    """Squared norm of the Hardy embedding into ``L^2(mu~)``."""

    subcap: tuple[SubcapResult, ...]
    checks: tuple[TraceCheck, ...]
    """The easy-direction inequality on each strategy's best collection."""

    @property
    def subcap_constant(self) -> float:
        return max((s.constant for s in self.subcap), default=0.0)

    @property
    def ratio(self) -> float:
        """Embedding constant over capacitary constant."""
        c = self.subcap_constant
        return self.norm_sq / c if c > 0 else math.inf

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)


def carleson_test(
    atoms: Iterable[BidiscAtom],
    depth: int,
    /,
    strategies: Sequence[SubcapStrategy] = ("single-box",),
    *,
    seed: int = 0,
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
) -> CarlesonReport:
    """Pull ``atoms`` back to the bitree and measure both Carleson constants.

    Examples
    --------
    >>> from bicap.bridge import BidiscAtom, carleson_test
    >>> rep = carleson_test([BidiscAtom((0, 0), (0, 0), 1.0)], 2)
    >>> round(rep.norm_sq, 9), rep.subcap_constant, round(rep.ratio, 9), rep.holds
    (1.0, 1.0, 1.0, True)

    """
    nu = pullback_measure(atoms, depth)
    trace = trace_norm_estimate(nu, seed=seed)
    subcap = tuple(subcap_constant(nu, s, seed=seed, solver=solver) for s in strategies)
    checks = tuple(
        trace_upper_bound_check(
            nu, s.collection, norm_sq=trace.norm_sq + trace.residual, solver=solver
        )
        for s in subcap
        if not s.collection.is_empty
    )
    report = CarlesonReport(
        depth=depth,
        total_mass=nu.total(),
        norm_sq=trace.norm_sq,
        subcap=subcap,
        checks=checks,
    )
    logger.info(
        "carleson depth=%d: norm_sq=%.6g subcap=%.6g ratio=%.6g",
        depth,
        report.norm_sq,
        report.subcap_constant,
        report.ratio,
    )
    return report
