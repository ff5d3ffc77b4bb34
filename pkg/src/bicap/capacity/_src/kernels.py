"""Normalized potential kernels restricted to a finite point set.

A kernel represents the matrix ``G'[i, j] = d(points[i] ∧ points[j]) / k``
with ``k`` the largest diagonal meet count. For atom weights ``w`` the vector
``G' w`` is the potential ``V^mu`` at the points of the measure
``mu = w / k``.

"""

__all__ = [
    "AbstractKernel",
    "GramKernel",
    "TreeKernel",
    "KernelKind",
    "make_kernel",
]

import abc
from collections.abc import Sequence
from typing import Literal, TypeAlias

import equinox as eqx
import jax.numpy as jnp
import jax.scipy.sparse.linalg as jsla
from jaxtyping import Array, Int

from .problem import gram_matrix
from bicap.bitree import AnyNode, Node2, TreeShape, common_ancestor_count
from bicap.potential import dense_ok, potential_dense
from bicap.typing import AtomMask, AtomVector, GramMatrix

KernelKind: TypeAlias = Literal["auto", "gram", "tree"]

# Point counts above which "auto" prefers the dense tree operators.
_GRAM_POINT_LIMIT = 2048


class AbstractKernel(eqx.Module):
    """ABC for the normalized kernel on a point set."""

    points: eqx.AbstractVar[tuple[AnyNode, ...]]
    scale: eqx.AbstractVar[int]

    @property
    def n(self) -> int:
        return len(self.points)

    @abc.abstractmethod
    def matvec(self, w: AtomVector, /) -> AtomVector:
        """``G' w``."""
        raise NotImplementedError

    @abc.abstractmethod
    def solve_on(self, support: AtomMask, /) -> AtomVector:
        """Solve ``G'_SS z = 1`` on ``support``; zero elsewhere."""
        raise NotImplementedError

    def diagonal(self) -> AtomVector:
        return jnp.asarray([common_ancestor_count(p, p) / self.scale for p in self.points])

    def row_sums(self) -> AtomVector:
        return self.matvec(jnp.ones(self.n))


class GramKernel(AbstractKernel):
    """The explicit Gram matrix; any depth, quadratic memory.

    Examples
    --------
    >>> import jax.numpy as jnp
    >>> from bicap.bitree import Node1, Node2
    >>> from bicap.capacity import GramKernel
    >>> a = Node1(1, 0)
    >>> kern = GramKernel.from_points([Node2(a, a)])
    >>> kern.scale, kern.matvec(jnp.ones(1)).tolist()
    (4, [1.0])

    """

    points: tuple[AnyNode, ...] = eqx.field(static=True)
    gram: GramMatrix
    scale: int = eqx.field(static=True)

    @classmethod
    def from_points(cls, points: Sequence[AnyNode], /) -> "GramKernel":
        pts = tuple(points)
        scale = max((common_ancestor_count(p, p) for p in pts), default=1)
        return cls(pts, gram_matrix(pts, scale=scale), scale)

    @eqx.filter_jit
    def matvec(self, w: AtomVector, /) -> AtomVector:
        return self.gram @ w

    def solve_on(self, support: AtomMask, /) -> AtomVector:
        idx = jnp.flatnonzero(support)
        sub = self.gram[jnp.ix_(idx, idx)]
        z = jnp.linalg.solve(sub, jnp.ones(idx.shape[0]))
        return jnp.zeros(self.n).at[idx].set(z)


class TreeKernel(AbstractKernel):
    """Matrix-free kernel through the dense heap operators.

    ``G' w`` scatters ``w / k`` onto the (bi)tree, applies ``I I*`` and reads
    the potential back at the points. Linear memory in the tree size.
    """

    shape: TreeShape
    points: tuple[AnyNode, ...] = eqx.field(static=True)
    index: Int[Array, "n d"]
    scale: int = eqx.field(static=True)

    @classmethod
    def from_points(cls, shape: TreeShape, points: Sequence[AnyNode], /) -> "TreeKernel":
        if not dense_ok(shape):
            msg = f"{shape} is too large for the dense tree kernel"
            raise ValueError(msg)
        pts = tuple(points)
        hi = shape.heap_index
        rows = [
            (hi(p.x), hi(p.y)) if isinstance(p, Node2) else (hi(p),)  # type: ignore[arg-type]
            for p in pts
        ]
        index = jnp.asarray(rows, dtype=int).reshape(len(pts), shape.ndim)
        scale = max((common_ancestor_count(p, p) for p in pts), default=1)
        return cls(shape, pts, index, scale)

    @eqx.filter_jit
    def matvec(self, w: AtomVector, /) -> AtomVector:
        at = tuple(self.index.T)
        dense = jnp.zeros(self.shape.dense_shape).at[at].add(w / self.scale)
        return potential_dense(dense, depth=self.shape.depth)[at]

    def solve_on(self, support: AtomMask, /) -> AtomVector:
        mask = support.astype(float)

        def op(z: AtomVector) -> AtomVector:
            return mask * self.matvec(mask * z) + (1.0 - mask) * z

        z, _ = jsla.cg(op, mask, tol=1e-13, maxiter=10 * self.n)
        return mask * z


def make_kernel(
    shape: TreeShape, points: Sequence[AnyNode], /, kind: KernelKind = "auto"
) -> AbstractKernel:
    """Build the kernel for ``points``.

    ``"auto"`` uses the explicit Gram matrix unless there are many points
    and the tree is small enough for the dense operators.
    """
    if kind == "gram":
        return GramKernel.from_points(points)
    if kind == "tree":
        return TreeKernel.from_points(shape, points)
    if kind == "auto":
        if len(points) > _GRAM_POINT_LIMIT and dense_ok(shape):
            return TreeKernel.from_points(shape, points)
        return GramKernel.from_points(points)
    msg = f"unknown kernel kind {kind!r}"
    raise ValueError(msg)
