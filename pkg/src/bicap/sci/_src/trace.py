"""Trace inequality checks and subcapacitary constants."""

__all__ = [
    "TraceCheck",
    "trace_upper_bound_check",
    "SubcapResult",
    "SubcapStrategy",
    "subcap_constant",
    "box_mass",
]

import logging
from collections.abc import Mapping, Sequence
from typing import Any, Literal, TypeAlias

import equinox as eqx
import jax.random as jr

from .levelsets import level_sets
from bicap.bitree import AnyNode, NodeSet, common_ancestor_count, is_ancestor, predecessors
from bicap.capacity import AbstractCapacitySolver, capacity
from bicap.potential import AbstractNodeMap, Measure, coI_function, trace_norm_estimate
from bicap.utils import parallel_map

logger = logging.getLogger(__name__)

SubcapStrategy: TypeAlias = Literal["single-box", "random-collections", "levelset-guided"]


def box_mass(nu: AbstractNodeMap, boxes: NodeSet, /) -> float:
    """``nu(∪ S(alpha))`` over the generators ``alpha`` of ``boxes``.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, Node1, Node2, NodeSet, TreeShape
    >>> from bicap.potential import Measure
    >>> from bicap.sci import box_mass
    >>> a = Node1(1, 0)
    >>> nu = Measure(TreeShape(1), {Node2(a, a): 1.0, ROOT2: 2.0})
    >>> box_mass(nu, NodeSet([Node2(a, Node1(0, 0))]))
    1.0

    """
    gens = boxes.generators().nodes
    return sum(
        (m for node, m in nu.items() if any(is_ancestor(g, node) for g in gens)),
        start=0.0,
    )


class TraceCheck(eqx.Module):
    """``nu(∪ S) <= |I|^2_{L^2(nu)} cap(∪ S)`` for one collection."""

    mass: float
    norm_sq: float
    cap: float
    holds: bool


def trace_upper_bound_check(
    nu: Measure,
    target: NodeSet,
    /,
    *,
    norm_sq: float | None = None,
    tol: float = 1e-8,
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
) -> TraceCheck:
    """Check the easy direction of the trace inequality on ``target``.

    ``target`` is read as the down-set of its vertices. Violations beyond
    ``10 tol`` (relative) make ``holds`` false.

    Power iteration approaches the embedding norm from below, so when
    ``norm_sq`` is not given the check uses the estimate plus its residual.
    A caller-supplied ``norm_sq`` is used as is.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, NodeSet, TreeShape
    >>> from bicap.potential import Measure
    >>> from bicap.sci import trace_upper_bound_check
    >>> nu = Measure(TreeShape(1), {ROOT2: 1.0})
    >>> trace_upper_bound_check(nu, NodeSet([ROOT2])).holds
    True

    """
    boxes = NodeSet(target.nodes, kind="downset")
    if norm_sq is None:
        est = trace_norm_estimate(nu)
        norm_sq = est.norm_sq + est.residual
    cap = capacity(nu.shape, boxes, solver=solver, tol=tol).cap
    mass = box_mass(nu, boxes)
    bound = norm_sq * cap
    holds = mass <= bound + 10 * tol * max(bound, mass, 1e-300)
    return TraceCheck(mass=mass, norm_sq=norm_sq, cap=cap, holds=holds)


class SubcapResult(eqx.Module):
    """Best ``nu(∪ S) / cap(∪ S)`` found by a sampling strategy."""

    strategy: SubcapStrategy = eqx.field(static=True)
    constant: float
    collection: NodeSet
    """The achieving collection (generators of the down-set)."""

    evaluated: int
    """Number of collections tried."""


def _candidates(nu: AbstractNodeMap) -> list[AnyNode]:
    """Vertices with ``nu(S(alpha)) > 0``: predecessors of the atoms."""
    out: set[AnyNode] = set()
    for node in nu:
        out.update(predecessors(node))
    return sorted(out)


def _single_box(nu: AbstractNodeMap) -> tuple[float, NodeSet, int]:
    # cap S(alpha) = 1 / d(alpha)
    best, arg = 0.0, NodeSet([])
    candidates = _candidates(nu)
    for alpha in candidates:
        ratio = box_mass(nu, NodeSet([alpha])) * common_ancestor_count(alpha, alpha)
        if ratio > best:
            best, arg = ratio, NodeSet([alpha])
    return best, arg, len(candidates)


def subcap_constant(
    nu: Measure,
    strategy: SubcapStrategy = "single-box",
    /,
    *,
    seed: int = 0,
    count: int = 64,
    max_size: int = 4,
    functions: Sequence[AbstractNodeMap] = (),
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
) -> SubcapResult:
    """Lower bound for ``sup nu(∪ S(alpha_j)) / cap(∪ S(alpha_j))``.

    Strategies
    ----------
    ``"single-box"``
        Every box ``S(alpha)`` with ``nu(S(alpha)) > 0``; exact, no solves.
    ``"random-collections"``
        The single boxes plus ``count`` seeded collections of up to
        ``max_size`` boxes.
    ``"levelset-guided"``
        The single boxes plus the level sets of ``I f`` for each of
        ``functions`` (default: ``I* nu``).

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape
    >>> from bicap.potential import Measure
    >>> from bicap.sci import subcap_constant
    >>> a = Node1(1, 0)
    >>> subcap_constant(Measure(TreeShape(1), {Node2(a, a): 0.5})).constant
    2.0

    """
    if nu.is_zero:
        return SubcapResult(strategy=strategy, constant=0.0, collection=NodeSet([]), evaluated=0)
    best, arg, evaluated = _single_box(nu)

    collections: list[NodeSet] = []
    if strategy == "random-collections":
        candidates = _candidates(nu)
        key = jr.key(seed)
        for _ in range(count):
            key, k_size, k_pick = jr.split(key, 3)
            size = int(jr.randint(k_size, (), 1, max_size + 1))
            picks = jr.choice(k_pick, len(candidates), (min(size, len(candidates)),), replace=False)
            collections.append(NodeSet(candidates[i] for i in picks.tolist()))
    elif strategy == "levelset-guided":
        for f in functions or (coI_function(nu),):
            collections.extend(lv.generators for lv in level_sets(f, solver=solver))
    elif strategy != "single-box":
        msg = f"unknown strategy {strategy!r}"
        raise ValueError(msg)

    def ratio(boxes: NodeSet) -> float:
        down = NodeSet(boxes.nodes, kind="downset")
        cap = capacity(nu.shape, down, solver=solver).cap
        return box_mass(nu, down) / cap if cap > 0 else 0.0

    for boxes, value in zip(collections, parallel_map(ratio, collections), strict=True):
        if value > best:
            best, arg = value, NodeSet(boxes.generators().nodes)
    evaluated += len(collections)
    logger.info("subcap[%s]: constant=%.6g over %d collections", strategy, best, evaluated)
    return SubcapResult(strategy=strategy, constant=best, collection=arg, evaluated=evaluated)
