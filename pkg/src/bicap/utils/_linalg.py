"""Matrix-free linear algebra."""

__all__ = ["PowerIterationResult", "power_iteration"]

import logging
from collections.abc import Callable

import equinox as eqx
import jax
import jax.numpy as jnp
from jaxtyping import Array, Float

logger = logging.getLogger(__name__)


class PowerIterationResult(eqx.Module):
    """Outcome of :func:`power_iteration`."""

    eigenvalue: float
    """Final Rayleigh quotient."""

    vector: Float[Array, "..."]
    """Final unit-norm iterate."""

    iterations: int
    converged: bool


def power_iteration(
    matvec: Callable[[Float[Array, "..."]], Float[Array, "..."]],
    x0: Float[Array, "..."],
    /,
    *,
    tol: float = 1e-9,
    max_iters: int = 10_000,
) -> PowerIterationResult:
    """Largest eigenvalue of a self-adjoint positive operator.

    Iterates ``x <- A x / |A x|`` and stops when successive Rayleigh quotients
    differ by less than ``tol`` relatively.

    Parameters
    ----------
    matvec : Callable[[Array], Array]
        Application of the operator. Must be traceable by JAX.
    x0 : Array
        Start vector; a zero vector yields eigenvalue 0.
    tol : float, optional keyword-only
        Relative tolerance on the Rayleigh quotient.
    max_iters : int, optional keyword-only
        Iteration cap.

    Examples
    --------
    >>> import jax.numpy as jnp
    >>> from bicap.utils import power_iteration
    >>> a = jnp.diag(jnp.array([1.0, 3.0, 2.0]))
    >>> out = power_iteration(lambda v: a @ v, jnp.ones(3))
    >>> round(out.eigenvalue, 6), out.converged
    (3.0, True)

    """
    norm0 = jnp.linalg.norm(x0)
    if float(norm0) == 0.0:
        return PowerIterationResult(
            eigenvalue=0.0, vector=x0, iterations=0, converged=True
        )

    def cond(state: tuple[Array, Array, Array, Array]) -> Array:
        _, prev, quot, it = state
        unsettled = jnp.abs(quot - prev) > tol * jnp.abs(quot)
        return (it < max_iters) & ((it < 2) | unsettled)  # noqa: PLR2004

    def body(state: tuple[Array, Array, Array, Array]) -> tuple[Array, ...]:
        x, _, quot, it = state
        y = matvec(x)
        new_quot = jnp.vdot(x, y)
        norm = jnp.linalg.norm(y)
        x_new = jnp.where(norm > 0, y / jnp.where(norm > 0, norm, 1.0), x)
        return x_new, quot, new_quot, it + 1

    init = (x0 / norm0, jnp.asarray(jnp.inf), jnp.asarray(0.0), jnp.asarray(0))
    x, prev, quot, it = jax.lax.while_loop(cond, body, init)

    eigenvalue = float(quot)
    iterations = int(it)
    converged = bool(abs(eigenvalue - float(prev)) <= tol * abs(eigenvalue))
    logger.debug(
        "power iteration: eigenvalue=%.12g iterations=%d converged=%s",
        eigenvalue,
        iterations,
        converged,
    )
    return PowerIterationResult(
        eigenvalue=eigenvalue, vector=x, iterations=iterations, converged=converged
    )
