"""Certificates and comparability reports for capacity solves."""

__all__ = ["KKTReport", "kkt_report", "GrandparentReport", "grandparent_ratio"]

from collections.abc import Mapping, Sequence
from typing import Any

import equinox as eqx

from .problem import CapacityProblem, CapacityResult
from .solver import AbstractCapacitySolver, capacity
from bicap.bitree import Node2, NodeSet, TreeShape
from bicap.potential import energy, potential


class KKTReport(eqx.Module):
    """Optimality numbers of an equilibrium measure.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, NodeSet, TreeShape
    >>> from bicap.capacity import CapacityProblem, capacity, kkt_report
    >>> prob = CapacityProblem(TreeShape(1), NodeSet([ROOT2], kind="boundary"))
    >>> kkt_report(capacity(prob), prob).holds(1e-9)
    True

    """

    min_potential: float
    """Smallest ``V^mu`` over the target (at its maximal elements)."""

    max_support_deviation: float
    """Largest ``|V^mu - 1|`` over the support of ``mu``."""

    mass_gap: float
    """``|cap - mu(E)| / cap``."""

    energy_gap: float
    """``|cap - E[mu]| / cap``."""

    def holds(self, tol: float, /) -> bool:
        return (
            self.min_potential >= 1.0 - tol
            and self.max_support_deviation <= tol
            and self.mass_gap <= tol
            and self.energy_gap <= tol
        )


def kkt_report(result: CapacityResult, problem: CapacityProblem, /) -> KKTReport:
    """Evaluate the equilibrium conditions of ``result`` for ``problem``."""
    mu = result.equilibrium
    points = problem.constraint_points()
    if not points:
        return KKTReport(
            min_potential=float("inf"),
            max_support_deviation=0.0,
            mass_gap=0.0,
            energy_gap=0.0,
        )
    on_target = potential(mu, NodeSet(points))
    on_support = potential(mu, mu.support())
    cap = result.cap
    return KKTReport(
        min_potential=on_target.min(),
        max_support_deviation=max((abs(v - 1.0) for _, v in on_support.items()), default=0.0),
        mass_gap=abs(cap - mu.total()) / cap,
        energy_gap=abs(cap - energy(mu)) / cap,
    )


class GrandparentReport(eqx.Module):
    """Capacities of the boxes of a family and of their parents' boxes."""

    cap_points: float
    cap_parents: float

    @property
    def ratio(self) -> float:
        """``cap(parents) / cap(points)``, at least 1."""
        return self.cap_parents / self.cap_points


def grandparent_ratio(
    points: Sequence[Node2],
    shape: TreeShape,
    /,
    *,
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
) -> GrandparentReport:
    """Compare ``cap ∪ S(alpha_j)`` with ``cap ∪ S(p(alpha_j))``.

    ``p`` is the coordinatewise parent (a root coordinate stays put).

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape
    >>> from bicap.capacity import grandparent_ratio
    >>> a = Node1(1, 0)
    >>> round(grandparent_ratio([Node2(a, a)], TreeShape(2)).ratio, 9)
    4.0

    """
    if not points:
        msg = "grandparent_ratio needs at least one point"
        raise ValueError(msg)
    boxes = NodeSet(points, kind="downset")
    parents = NodeSet((p.parent for p in points), kind="downset")
    cap_points = capacity(shape, boxes, solver=solver).cap
    cap_parents = capacity(shape, parents, solver=solver).cap
    return GrandparentReport(cap_points=cap_points, cap_parents=cap_parents)
