"""Capacities of finite point sets through the Gram matrix."""

__all__ = ["capacity_atomic"]

import logging
import warnings
from collections.abc import Sequence

import jax.numpy as jnp

from .kernels import GramKernel
from .problem import AtomicProblem, CapacityResult
from .solver import duality_gap
from bicap.bitree import AnyNode, Node2, TreeShape
from bicap.potential import Measure
from bicap.utils.exceptions import BicapWarning, NotCertifiedError

logger = logging.getLogger(__name__)


def _active_set(problem: AtomicProblem, *, tol: float, max_iters: int) -> tuple[list[float], int]:
    """Lawson-Hanson active set for ``min w'Gw/2 - sum(w)`` over ``w >= 0``.

    Returns the weights and the number of active-set changes.
    """
    gram = problem.gram
    n = len(problem.points)
    w = jnp.zeros(n)
    free = jnp.zeros(n, dtype=bool)
    changes = 0
    while changes < max_iters:
        residual = 1.0 - gram @ w
        candidates = jnp.where(free, -jnp.inf, residual)
        if float(jnp.max(candidates)) <= tol:
            break
        free = free.at[jnp.argmax(candidates)].set(True)
        changes += 1
        while True:
            idx = jnp.flatnonzero(free)
            z_free = jnp.linalg.solve(gram[jnp.ix_(idx, idx)], jnp.ones(idx.shape[0]))
            z = jnp.zeros(n).at[idx].set(z_free)
            blocked = free & (z <= 0)
            if not bool(jnp.any(blocked)):
                w = z
                break
            # step toward z until the first free weight hits zero
            ratios = jnp.where(blocked, w / jnp.where(blocked, w - z, 1.0), jnp.inf)
            w = w + float(jnp.min(ratios)) * (z - w)
            free = free & (w > 0)
            w = jnp.where(free, w, 0.0)
            changes += 1
    return w.tolist(), changes


def capacity_atomic(
    points: Sequence[AnyNode],
    /,
    shape: TreeShape | None = None,
    *,
    normalize: bool = True,
    tol: float = 1e-12,
    max_iters: int = 100_000,
    require_certified: bool = False,
) -> CapacityResult:
    """Capacity of a finite point set by an exact active-set solve.

    Only meets of the points are used, so the points may be arbitrarily
    deep. With ``normalize`` the Gram matrix is divided by its largest
    diagonal entry and the result scaled back.

    Parameters
    ----------
    points : Sequence[Node1 | Node2]
        The target points. Repeats are merged with a `BicapWarning`.
    shape : TreeShape, optional
        Shape of the equilibrium measure; defaults to the shallowest shape
        holding every point.
    normalize : bool, optional keyword-only
    tol : float, optional keyword-only
        Optimality tolerance on ``1 - V`` outside the support.
    max_iters : int, optional keyword-only
        Cap on active-set changes.
    require_certified : bool, optional keyword-only
        Raise `NotCertifiedError` instead of returning an uncertified result.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2
    >>> from bicap.capacity import capacity_atomic
    >>> pts = [Node2(Node1(3, 0), Node1(0, 0)), Node2(Node1(1, 0), Node1(1, 0)),
    ...        Node2(Node1(0, 0), Node1(3, 0))]
    >>> res = capacity_atomic(pts)
    >>> round(res.cap, 12)
    0.416666666667
    >>> [round(m, 12) for m in res.equilibrium.atoms.values()]
    [0.166666666667, 0.083333333333, 0.166666666667]

    """
    unique = sorted(set(points))
    if len(unique) < len(points):
        warnings.warn(
            f"merged {len(points) - len(unique)} repeated points",
            BicapWarning,
            stacklevel=2,
        )
    if shape is None:
        shape = _enclosing_shape(unique)
    if not unique:
        return CapacityResult(
            cap=0.0, equilibrium=Measure(shape, {}), gap=0.0, iterations=0, certified=True
        )

    problem = AtomicProblem.from_(unique, normalize=normalize)
    w, changes = _active_set(problem, tol=tol, max_iters=max_iters)
    kernel = GramKernel(problem.points, problem.gram, problem.scale)
    gap, s, _ = duality_gap(kernel, jnp.asarray(w))
    certified = changes < max_iters
    cap = s / problem.scale
    logger.info(
        "atomic capacity: cap=%.12g gap=%.3e changes=%d points=%d",
        cap,
        gap,
        changes,
        len(unique),
    )
    if require_certified and not certified:
        msg = f"active set did not settle within {max_iters} changes"
        raise NotCertifiedError(msg)
    return CapacityResult(
        cap=cap,
        equilibrium=Measure(
            shape,
            {p: wi / problem.scale for p, wi in zip(problem.points, w, strict=True) if wi > 0},
        ),
        gap=gap,
        iterations=changes,
        certified=certified,
    )


def _enclosing_shape(points: Sequence[AnyNode]) -> TreeShape:
    if points and isinstance(points[0], Node2):
        depth = max(max(p.x.level, p.y.level) for p in points)  # type: ignore[union-attr]
        return TreeShape(max(depth, 1))
    depth = max((p.level for p in points), default=1)  # type: ignore[union-attr]
    return TreeShape(max(depth, 1), ndim=1)
