"""One-tree potential-theoretic principles as checks."""

__all__ = ["superharmonic_check", "max_principle_gap", "domination_holds"]

import jax.numpy as jnp

from .api import dense_ok
from .fields import AbstractNodeMap, Measure
from .operators import hardy_dense, potential_dense
from bicap.bitree import Node1, TreeShape
from bicap.utils.exceptions import HypothesisError


def _require_tree(shape: TreeShape, what: str) -> None:
    if shape.ndim != 1:
        msg = f"{what} is a one-tree check, got a bitree shape"
        raise ValueError(msg)


def superharmonic_check(f: AbstractNodeMap, /, *, rtol: float = 1e-12) -> bool:
    """Whether ``f(a) >= f(a+) + f(a-)`` at every interior vertex of ``T``.

    Only vertices in the support of ``f`` and their parents can fail, so the
    check is sparse and works at any depth. ``rtol`` absorbs rounding in the
    children's sum.

    Examples
    --------
    >>> from bicap.bitree import Node1, TreeShape
    >>> from bicap.potential import SparseFunction, superharmonic_check
    >>> shape = TreeShape(1, ndim=1)
    >>> superharmonic_check(SparseFunction(shape, {Node1(0, 0): 2.0, Node1(1, 1): 1.0}))
    True
    >>> superharmonic_check(SparseFunction(shape, {Node1(1, 0): 1.0}))
    False

    """
    _require_tree(f.shape, "superharmonicity")
    depth = f.shape.depth
    candidates: set[Node1] = set()
    for node in f:
        candidates.add(node)  # type: ignore[arg-type]
        if (parent := node.parent) is not None:  # type: ignore[union-attr]
            candidates.add(parent)
    for node in sorted(candidates):
        if node.level >= depth:
            continue
        left, right = node.children
        below = f[left] + f[right]
        if f[node] < below * (1.0 - rtol):
            return False
    return True


def max_principle_gap(rho: Measure, /) -> float:
    """``sup_T V^rho - sup_{supp rho} V^rho`` on one tree.

    The maximum principle says this is never positive.

    Examples
    --------
    >>> from bicap.bitree import Node1, TreeShape
    >>> from bicap.potential import Measure, max_principle_gap
    >>> rho = Measure(TreeShape(2, ndim=1), {Node1(1, 0): 1.0, Node1(2, 3): 0.5})
    >>> max_principle_gap(rho)
    0.0

    """
    _require_tree(rho.shape, "the maximum principle")
    if rho.is_zero:
        return 0.0
    if not dense_ok(rho.shape):
        msg = f"{rho.shape} is too large for a dense evaluation"
        raise ValueError(msg)
    pot = potential_dense(rho.to_dense(), depth=rho.shape.depth)
    on_support = jnp.max(jnp.where(rho.to_dense() > 0, pot, -jnp.inf))
    return float(jnp.max(pot) - on_support)


def domination_holds(
    f: AbstractNodeMap, nu: Measure, /, *, atol: float = 1e-12
) -> bool:
    """Check ``I f >= V^nu`` everywhere given it on ``supp nu``.

    Raises
    ------
    HypothesisError
        If ``f`` is not superharmonic or ``I f < V^nu`` somewhere on the
        support of ``nu``.

    Examples
    --------
    >>> from bicap.bitree import Node1, TreeShape
    >>> from bicap.potential import Measure, SparseFunction, domination_holds
    >>> shape = TreeShape(2, ndim=1)
    >>> nu = Measure(shape, {Node1(2, 1): 0.25})
    >>> f = SparseFunction(shape, {Node1(0, 0): 1.0})
    >>> domination_holds(f, nu)
    True

    """
    _require_tree(f.shape, "the domination principle")
    if f.shape != nu.shape:
        msg = f"shape mismatch: {f.shape} vs {nu.shape}"
        raise ValueError(msg)
    if not superharmonic_check(f):
        msg = "f is not superharmonic"
        raise HypothesisError(msg)
    depth = f.shape.depth
    If = hardy_dense(f.to_dense(), depth=depth)
    pot = potential_dense(nu.to_dense(), depth=depth)
    support = nu.to_dense() > 0
    if bool(jnp.any(support & (If < pot - atol))):
        msg = "I f < V^nu somewhere on supp nu"
        raise HypothesisError(msg)
    return bool(jnp.all(If >= pot - atol))
