"""Staircase point sets whose equilibrium potential overshoots off the support."""

__all__ = ["StaircaseConfig", "StaircaseReport", "staircase_points", "build_staircase"]

import logging
import math

import equinox as eqx

from bicap.bitree import AnyNode, Node1, Node2, TreeShape, common_ancestor_count, prefix
from bicap.capacity import capacity_atomic
from bicap.potential import Measure, potential

logger = logging.getLogger(__name__)


class StaircaseConfig(eqx.Module):
    """``n + 1`` bitree points ``a^i`` with ``d(a^i_x) = b**(n-i)``, ``d(a^i_y) = b**i``.

    All points lie on the geodesics from the root to ``anchor``, a leaf pair
    of the tree of depth ``b**n - 1`` (the leftmost one by default), so each
    has ``d_{T^2}(a^i) = k = b**n``.

    Examples
    --------
    >>> from bicap.counterexamples import StaircaseConfig
    >>> cfg = StaircaseConfig(2, 2)
    >>> cfg.k, cfg.depth
    (4, 3)

    """

    base: int = eqx.field(static=True)
    steps: int = eqx.field(static=True)
    anchor: Node2 | None = eqx.field(default=None, static=True)

    def __check_init__(self) -> None:
        if self.base < 2:  # noqa: PLR2004
            msg = f"base must be >= 2, got {self.base}"
            raise ValueError(msg)
        if self.steps < 1:
            msg = f"steps must be >= 1, got {self.steps}"
            raise ValueError(msg)
        if self.anchor is not None and not (
            self.shape.contains(self.anchor)
            and self.anchor.x.level == self.depth
            and self.anchor.y.level == self.depth
        ):
            msg = f"anchor {self.anchor} is not a leaf pair of depth {self.depth}"
            raise ValueError(msg)

    @property
    def k(self) -> int:
        return self.base**self.steps

    @property
    def depth(self) -> int:
        return self.k - 1

    @property
    def shape(self) -> TreeShape:
        return TreeShape(self.depth)

    @property
    def omega(self) -> Node2:
        """The anchor leaf pair."""
        if self.anchor is not None:
            return self.anchor
        leaf = Node1(self.depth, 0)
        return Node2(leaf, leaf)


def _on_geodesic(leaf: Node1, level: int) -> Node1:
    return Node1(level, prefix(leaf.pos, leaf.level - level))


def staircase_points(config: StaircaseConfig, /) -> tuple[Node2, ...]:
    """The points ``a^0 .. a^n``, ordered by ``i``.

    Examples
    --------
    >>> from bicap.counterexamples import StaircaseConfig, staircase_points
    >>> [(p.x.level, p.y.level) for p in staircase_points(StaircaseConfig(2, 2))]
    [(3, 0), (1, 1), (0, 3)]

    """
    b, n = config.base, config.steps
    omega = config.omega
    return tuple(
        Node2(
            _on_geodesic(omega.x, b ** (n - i) - 1),
            _on_geodesic(omega.y, b**i - 1),
        )
        for i in range(n + 1)
    )


class StaircaseReport(eqx.Module):
    """The equilibrium measure of a staircase and how its potential behaves."""

    config: StaircaseConfig
    points: tuple[Node2, ...] = eqx.field(static=True)
    equilibrium: Measure
    cap: float
    support_potentials: tuple[float, ...]
    """``V^mu`` at every point, in point order."""

    omega_potential: float
    """``V^mu(omega) = k |mu|``."""

    omega_potential_direct: float
    """``V^mu(omega)`` summed over atoms, as a cross-check."""

    sup_inf_ratio: float
    """``max mu_i / min mu_i``; infinite if some point carries no mass."""

    offdiag_row_bound: float
    """``max_i sum_{j != i} d(a^i ∧ a^j) / k``."""

    certified: bool

    @property
    def max_support_potential(self) -> float:
        return max(self.support_potentials)


def _offdiag_row_bound(points: tuple[AnyNode, ...], k: int) -> float:
    best = 0
    for i, a in enumerate(points):
        row = sum(common_ancestor_count(a, b) for j, b in enumerate(points) if j != i)
        best = max(best, row)
    return best / k


def build_staircase(config: StaircaseConfig, /) -> StaircaseReport:
    """Solve the staircase equilibrium with the exact Gram solver.

    The Gram matrix is normalized by ``k``; entries are ``b**(j - i)`` for
    ``i > j``. Levels are exact integers, so ``b = 20, n = 40`` works.

    Examples
    --------
    >>> from bicap.counterexamples import StaircaseConfig, build_staircase
    >>> rep = build_staircase(StaircaseConfig(2, 2))
    >>> round(rep.cap, 12), round(rep.omega_potential, 12)
    (0.416666666667, 1.666666666667)
    >>> round(rep.max_support_potential, 12), rep.offdiag_row_bound
    (1.0, 1.0)

    """
    points = staircase_points(config)
    result = capacity_atomic(points, config.shape)
    mu = result.equilibrium
    masses = [mu[p] for p in points]
    k = config.k
    omega = config.omega
    low = min(masses)
    report = StaircaseReport(
        config=config,
        points=points,
        equilibrium=mu,
        cap=result.cap,
        support_potentials=tuple(potential(mu, p) for p in points),
        omega_potential=k * math.fsum(masses),
        omega_potential_direct=potential(mu, omega),
        sup_inf_ratio=max(masses) / low if low > 0 else math.inf,
        offdiag_row_bound=_offdiag_row_bound(points, k),
        certified=result.certified,
    )
    logger.info(
        "staircase b=%d n=%d: cap=%.6g, V(omega)=%.6g, max V on support=%.6g",
        config.base,
        config.steps,
        report.cap,
        report.omega_potential,
        report.max_support_potential,
    )
    return report
