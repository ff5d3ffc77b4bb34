"""Capacity problems and results."""

__all__ = ["CapacityProblem", "CapacityResult", "AtomicProblem", "gram_matrix"]

from collections.abc import Iterable, Sequence
from typing import Any

import equinox as eqx
import jax.numpy as jnp
from plum import dispatch

from bicap.bitree import (
    AnyNode,
    Node2,
    NodeSet,
    TreeShape,
    common_ancestor_count,
    meet_count_matrix,
    predecessors,
)
from bicap.potential import Measure, SparseFunction, coI_function, dense_ok
from bicap.typing import GramMatrix

# Levels up to which Gram entries go through the vectorized meet path.
_VECTOR_LEVEL_LIMIT = 52
# Cap on predecessor visits when building a sparse primal function.
_SPARSE_PRIMAL_LIMIT = 1 << 22


def _as_nodeset(obj: NodeSet | Iterable[AnyNode]) -> NodeSet:
    return obj if isinstance(obj, NodeSet) else NodeSet(obj)


class CapacityProblem(eqx.Module):
    """The capacity of a target set of a truncated (bi)tree.

    ``target`` may be an exact set, a down-set given by generators, or a
    boundary projection (``kind="boundary"``). Since ``I phi`` increases
    toward the boundary, the constraint ``I phi >= 1`` is only imposed at the
    maximal elements of the target, see :meth:`constraint_points`.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, Node1, Node2, NodeSet, TreeShape
    >>> from bicap.capacity import CapacityProblem
    >>> a = Node1(1, 0)
    >>> prob = CapacityProblem(TreeShape(1), [ROOT2, Node2(a, a)])
    >>> prob.constraint_points()
    (Node2(x=Node1(level=0, pos=0), y=Node1(level=0, pos=0)),)
    >>> len(CapacityProblem(TreeShape(1), NodeSet([ROOT2], kind="boundary")).constraint_points())
    4

    """

    shape: TreeShape
    target: NodeSet = eqx.field(converter=_as_nodeset)
    tol: float = 1e-8
    max_iters: int = 20_000

    def __check_init__(self) -> None:
        if not self.tol > 0:
            msg = f"tol must be positive, got {self.tol}"
            raise ValueError(msg)
        if self.max_iters < 1:
            msg = f"max_iters must be positive, got {self.max_iters}"
            raise ValueError(msg)
        for node in self.target:
            if not self.shape.contains(node):
                msg = f"{node} is not a vertex of {self.shape}"
                raise ValueError(msg)

    @property
    def is_empty(self) -> bool:
        return self.target.is_empty

    def constraint_points(self) -> tuple[AnyNode, ...]:
        """Maximal elements of the target, where ``I phi >= 1`` is imposed."""
        if self.target.kind == "boundary":
            # leaves below an antichain of generators are themselves an antichain
            return self.target.generators().materialize(self.shape).nodes
        return self.target.generators().nodes


class CapacityResult(eqx.Module):
    """Capacity, equilibrium measure and certificate of a solve.

    ``gap`` is the relative gap between the dual value and the primal upper
    bound; the result is ``certified`` when it fell below the tolerance.
    """

    cap: float
    equilibrium: Measure
    gap: float
    iterations: int
    certified: bool

    @property
    def shape(self) -> TreeShape:
        return self.equilibrium.shape

    @property
    def primal(self) -> SparseFunction:
        """The optimal function ``phi* = I* mu_E``."""
        mu = self.equilibrium
        if dense_ok(mu.shape):
            return coI_function(mu)
        visits = sum(common_ancestor_count(a, a) for a in mu)
        if visits > _SPARSE_PRIMAL_LIMIT:
            msg = "the primal function has too many non-zero vertices to build"
            raise ValueError(msg)
        return SparseFunction(
            mu.shape, [(p, m) for a, m in mu.items() for p in predecessors(a)]
        )


class AtomicProblem(eqx.Module):
    """Atoms at given points with their exact Gram matrix of meet counts.

    ``gram`` holds ``d(points[i] ∧ points[j]) / scale``; with normalization
    the scale is the largest diagonal entry, otherwise 1. Entries are
    computed from meets only, so points may sit arbitrarily deep.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2
    >>> from bicap.capacity import AtomicProblem
    >>> o, a = Node1(0, 0), Node1(1, 0)
    >>> prob = AtomicProblem.from_([Node2(a, a), Node2(o, o)])
    >>> prob.scale, prob.gram.tolist()
    (4, [[1.0, 0.25], [0.25, 0.25]])

    """

    points: tuple[AnyNode, ...] = eqx.field(static=True)
    gram: GramMatrix
    scale: int = eqx.field(default=1, static=True)

    def __check_init__(self) -> None:
        n = len(self.points)
        if self.gram.shape != (n, n):
            msg = f"gram must be {n}x{n}, got {self.gram.shape}"
            raise ValueError(msg)

    @property
    def exact_gram(self) -> list[list[int]]:
        """Integer meet counts ``d(points[i] ∧ points[j])``."""
        return [[common_ancestor_count(a, b) for b in self.points] for a in self.points]

    @classmethod
    @dispatch.abstract
    def from_(cls: "type[AtomicProblem]", *args: Any, **kwargs: Any) -> "AtomicProblem":
        """Construct from another representation."""
        raise NotImplementedError  # pragma: no cover


def _max_level(points: Sequence[AnyNode]) -> int:
    return max(
        (max(p.x.level, p.y.level) if isinstance(p, Node2) else p.level for p in points),
        default=0,
    )


def gram_matrix(points: Sequence[AnyNode], /, *, scale: int = 1) -> GramMatrix:
    """``d(points[i] ∧ points[j]) / scale`` as a float64 matrix."""
    if not points:
        return jnp.zeros((0, 0))
    if _max_level(points) <= _VECTOR_LEVEL_LIMIT:
        return meet_count_matrix(points, points) / scale
    # exact integer meets, one correctly rounded division each
    return jnp.asarray(
        [[common_ancestor_count(a, b) / scale for b in points] for a in points]
    )


@AtomicProblem.from_.dispatch
def from_(
    cls: type[AtomicProblem], points: Sequence[AnyNode], /, *, normalize: bool = True
) -> AtomicProblem:
    """Compute the Gram matrix of ``points``."""
    pts = tuple(points)
    scale = max((common_ancestor_count(p, p) for p in pts), default=1) if normalize else 1
    return cls(pts, gram_matrix(pts, scale=scale), scale)


@AtomicProblem.from_.dispatch
def from_(cls: type[AtomicProblem], points: NodeSet, /, *, normalize: bool = True) -> AtomicProblem:  # noqa: F811
    return AtomicProblem.from_(points.nodes, normalize=normalize)
