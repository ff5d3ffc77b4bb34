"""Dense tree operators on heap-ordered arrays.

A vertex ``(j, l)`` of a depth-``L`` tree sits at heap index ``2**j - 1 + l``;
the block of level ``j`` is contiguous and the children of index ``i`` are the
pair ``2i + 1, 2i + 2``. Bitree arrays carry one heap axis per coordinate and
the operators factor over axes.

"""

__all__ = [
    "subtree_sum",
    "ancestor_sum",
    "coI_dense",
    "hardy_dense",
    "potential_dense",
    "energy_dense",
    "parent_mask",
]

from functools import partial

import jax
import jax.numpy as jnp
from jaxtyping import Array, Bool, Float

from bicap.typing import HeapArray


def _level_blocks(a: Array, depth: int) -> list[Array]:
    return [a[(1 << j) - 1 : (1 << (j + 1)) - 1] for j in range(depth + 1)]


@partial(jax.jit, static_argnames=("depth", "axis"))
def subtree_sum(a: Float[Array, "..."], *, depth: int, axis: int = 0) -> Float[Array, "..."]:
    """Sum over the successor set along one heap axis (the 1-D ``I*``).

    Examples
    --------
    >>> import jax.numpy as jnp
    >>> from bicap.potential import subtree_sum
    >>> subtree_sum(jnp.array([0.0, 1.0, 2.0]), depth=1).tolist()
    [3.0, 1.0, 2.0]

    """
    a = jnp.moveaxis(a, axis, 0)
    blocks = _level_blocks(a, depth)
    acc = blocks[-1]
    out = [acc]
    for block in reversed(blocks[:-1]):
        acc = block + acc.reshape(block.shape[0], 2, *block.shape[1:]).sum(axis=1)
        out.append(acc)
    return jnp.moveaxis(jnp.concatenate(out[::-1], axis=0), 0, axis)


@partial(jax.jit, static_argnames=("depth", "axis"))
def ancestor_sum(a: Float[Array, "..."], *, depth: int, axis: int = 0) -> Float[Array, "..."]:
    """Sum over the predecessor set along one heap axis (the 1-D ``I``).

    Examples
    --------
    >>> import jax.numpy as jnp
    >>> from bicap.potential import ancestor_sum
    >>> ancestor_sum(jnp.array([1.0, 1.0, 2.0]), depth=1).tolist()
    [1.0, 2.0, 3.0]

    """
    a = jnp.moveaxis(a, axis, 0)
    blocks = _level_blocks(a, depth)
    acc = blocks[0]
    out = [acc]
    for block in blocks[1:]:
        acc = block + jnp.repeat(acc, 2, axis=0)
        out.append(acc)
    return jnp.moveaxis(jnp.concatenate(out, axis=0), 0, axis)


@partial(jax.jit, static_argnames=("depth",))
def coI_dense(a: HeapArray, *, depth: int) -> HeapArray:
    """Adjoint Hardy operator ``I* mu (b) = mu(S(b))`` over every heap axis."""
    for axis in range(a.ndim):
        a = subtree_sum(a, depth=depth, axis=axis)
    return a


@partial(jax.jit, static_argnames=("depth",))
def hardy_dense(a: HeapArray, *, depth: int) -> HeapArray:
    """Hardy operator ``I phi (z) = sum of phi over P(z)`` over every heap axis."""
    for axis in range(a.ndim):
        a = ancestor_sum(a, depth=depth, axis=axis)
    return a


@partial(jax.jit, static_argnames=("depth",))
def potential_dense(a: HeapArray, *, depth: int) -> HeapArray:
    """Potential ``V^mu = I I* mu`` of a dense measure.

    Examples
    --------
    >>> import jax.numpy as jnp
    >>> from bicap.potential import potential_dense
    >>> mu = jnp.zeros((3, 3)).at[1, 1].set(1.0)
    >>> potential_dense(mu, depth=1)[1, 1].item()
    4.0

    """
    return hardy_dense(coI_dense(a, depth=depth), depth=depth)


@partial(jax.jit, static_argnames=("axis",))
def parent_mask(mask: Bool[Array, "..."], *, axis: int = 0) -> Bool[Array, "..."]:
    """For every vertex, whether its parent along ``axis`` is in ``mask``.

    The root has no parent and reads `False`.
    """
    m = jnp.moveaxis(mask, axis, 0)
    n = m.shape[0]
    parents = (jnp.arange(1, n) - 1) // 2
    shifted = jnp.concatenate([jnp.zeros_like(m[:1]), m[parents]], axis=0)
    return jnp.moveaxis(shifted, 0, axis)


@partial(jax.jit, static_argnames=("depth",))
def energy_dense(a: HeapArray, *, depth: int) -> Float[Array, ""]:
    """Energy ``|I* mu|^2`` of a dense measure."""
    co = coI_dense(a, depth=depth)
    return jnp.sum(co * co)
