"""Embedding norm of the Hardy operator into ``L^2(nu)``."""

__all__ = ["TraceNormResult", "trace_norm_estimate"]

import logging
import warnings

import equinox as eqx
import jax.numpy as jnp
import jax.random as jr
from jaxtyping import Array, Float

from .api import dense_ok
from .fields import Measure
from .operators import coI_dense, hardy_dense
from bicap.utils import power_iteration
from bicap.utils.exceptions import BicapWarning

logger = logging.getLogger(__name__)


class TraceNormResult(eqx.Module):
    """Outcome of :func:`trace_norm_estimate`."""

    norm_sq: float
    """Rayleigh quotient of the last iterate. It approaches the squared
    embedding norm (the top eigenvalue of ``I*_nu I``) from below."""

    residual: float
    """``|A x - norm_sq x|`` at the last iterate ``x``. Once ``x`` is aligned
    with the top eigenvector, ``norm_sq + residual`` bounds the norm above."""

    iterations: int
    converged: bool

    vector: Float[Array, "..."] = eqx.field(repr=False)
    """Last power-iteration iterate (heap ordered)."""


def trace_norm_estimate(
    nu: Measure,
    /,
    *,
    tol: float = 1e-9,
    max_iters: int = 10_000,
    seed: int = 0,
) -> TraceNormResult:
    """Estimate ``sup |I phi|^2_{L^2(nu)} / |phi|^2`` by power iteration.

    The operator ``phi -> I*_nu (I phi)`` is self-adjoint and positive on
    ``l^2`` of the (bi)tree and is applied matrix-free with the heap
    operators. The start vector is ``I* nu`` normalized, plus a small
    perturbation drawn from ``seed``.

    Non-convergence is reported through ``converged`` and a `BicapWarning`.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, Node1, Node2, TreeShape
    >>> from bicap.potential import Measure, trace_norm_estimate
    >>> shape = TreeShape(1)
    >>> round(trace_norm_estimate(Measure(shape, {ROOT2: 1.0})).norm_sq, 9)
    1.0
    >>> a = Node1(1, 0)
    >>> round(trace_norm_estimate(Measure(shape, {Node2(a, a): 1.0})).norm_sq, 9)
    4.0

    """
    if nu.is_zero:
        msg = "trace norm needs a non-zero measure"
        raise ValueError(msg)
    if not dense_ok(nu.shape):
        msg = f"{nu.shape} is too large for a dense trace-norm estimate"
        raise ValueError(msg)

    depth = nu.shape.depth
    weights = nu.to_dense()

    def matvec(phi: Array) -> Array:
        return coI_dense(weights * hardy_dense(phi, depth=depth), depth=depth)

    start = coI_dense(weights, depth=depth)
    start = start / jnp.linalg.norm(start)
    start = start + 1e-3 * jr.uniform(jr.key(seed), start.shape)

    out = power_iteration(matvec, start, tol=tol, max_iters=max_iters)
    logger.info(
        "trace norm: norm_sq=%.12g iterations=%d converged=%s",
        out.eigenvalue,
        out.iterations,
        out.converged,
    )
    if not out.converged:
        warnings.warn(
            f"power iteration stopped after {out.iterations} iterations without "
            f"reaching tol={tol}",
            BicapWarning,
            stacklevel=2,
        )
    residual = float(jnp.linalg.norm(matvec(out.vector) - out.eigenvalue * out.vector))
    return TraceNormResult(
        norm_sq=out.eigenvalue,
        residual=residual,
        iterations=out.iterations,
        converged=out.converged,
        vector=out.vector,
    )
