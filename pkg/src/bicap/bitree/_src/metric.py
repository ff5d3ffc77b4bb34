"""The metric on the closed bitree."""

__all__ = ["metric_delta"]

import math

from .nodes import Node2
from .ops import ancestor_count, meet1


def _dyadic(count: int) -> float:
    # 2**-count; ldexp saturates to 0.0 for astronomically deep vertices
    return math.ldexp(1.0, -count)


def metric_delta(zeta: Node2, xi: Node2, /) -> float:
    r"""Distance between two bitree vertices.

    .. math::

        \delta(\zeta, \xi) = 2^{-d(\zeta_x \wedge \xi_x)}
            + 2^{-d(\zeta_y \wedge \xi_y)}
            - \tfrac12 \left( 2^{-d(\zeta_x)} + 2^{-d(\xi_x)}
            + 2^{-d(\zeta_y)} + 2^{-d(\xi_y)} \right)

    Boundary vertices of the truncated tree use their finite ancestor count
    ``L + 1``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, metric_delta
    >>> z = Node2(Node1(2, 0), Node1(2, 0))
    >>> w = Node2(Node1(2, 3), Node1(2, 3))
    >>> metric_delta(z, w)
    0.75
    >>> metric_delta(z, z)
    0.0

    """
    meet_x = ancestor_count(meet1(zeta.x, xi.x))
    meet_y = ancestor_count(meet1(zeta.y, xi.y))
    own = (
        _dyadic(ancestor_count(zeta.x))
        + _dyadic(ancestor_count(xi.x))
        + _dyadic(ancestor_count(zeta.y))
        + _dyadic(ancestor_count(xi.y))
    )
    return _dyadic(meet_x) + _dyadic(meet_y) - 0.5 * own
