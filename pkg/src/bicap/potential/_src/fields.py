"""Sparse functions and measures on trees and bitrees.

Functions and measures share one representation: a sorted immutable map from
vertices to non-negative floats, absent vertices meaning zero. The two classes
differ only in how they are read.

"""

__all__ = [
    "AbstractNodeMap",
    "SparseFunction",
    "Measure",
    "PotentialField",
]

import abc
import math
from collections.abc import Callable, Iterable, Iterator, Mapping
from typing import Any, TypeVar

import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, Float
from plum import dispatch
from xmmutablemap import ImmutableMap

from bicap.bitree import AnyNode, Node2, NodeSet, TreeShape

NodeMapT = TypeVar("NodeMapT", bound="AbstractNodeMap")


def _canonical(
    data: Mapping[AnyNode, float] | Iterable[tuple[AnyNode, float]],
) -> ImmutableMap[AnyNode, float]:
    """Accumulate duplicates, drop zeros, sort keys."""
    items = data.items() if isinstance(data, Mapping) else data
    acc: dict[AnyNode, float] = {}
    for node, value in items:
        acc[node] = acc.get(node, 0.0) + float(value)
    return ImmutableMap({k: acc[k] for k in sorted(acc) if acc[k] != 0.0})


class AbstractNodeMap(eqx.Module):
    """ABC for sparse non-negative maps on the vertices of a `TreeShape`."""

    shape: eqx.AbstractVar[TreeShape]

    @property
    @abc.abstractmethod
    def data(self) -> ImmutableMap[AnyNode, float]:
        """The stored (non-zero) values."""
        raise NotImplementedError

    def __check_init__(self) -> None:
        for node, value in self.data.items():
            if not self.shape.contains(node):
                msg = f"{node} is not a vertex of {self.shape}"
                raise ValueError(msg)
            if not (math.isfinite(value) and value >= 0):
                msg = f"values must be finite and non-negative, got {value} at {node}"
                raise ValueError(msg)

    # ---------------------------------------------------------------
    # Mapping-like access

    def __getitem__(self, node: AnyNode, /) -> float:
        return self.data.get(node, 0.0)

    def __iter__(self) -> Iterator[AnyNode]:  # type: ignore[override]
        return iter(self.data)

    def __len__(self) -> int:
        return len(self.data)

    def items(self) -> Iterable[tuple[AnyNode, float]]:
        return self.data.items()

    @property
    def ndim(self) -> int:
        return self.shape.ndim

    @property
    def is_zero(self) -> bool:
        return len(self.data) == 0

    def support(self) -> NodeSet:
        """The vertices carrying non-zero values."""
        return NodeSet(self.data.keys())

    def total(self) -> float:
        """Sum of all values (total mass for a measure)."""
        return math.fsum(self.data.values())

    def norm_sq(self) -> float:
        """Squared ``l^2`` norm."""
        return math.fsum(v * v for v in self.data.values())

    # ---------------------------------------------------------------
    # Algebra

    def scale(self: NodeMapT, factor: float, /) -> NodeMapT:
        if factor < 0:
            msg = f"scale factor must be non-negative, got {factor}"
            raise ValueError(msg)
        return type(self)(self.shape, {k: factor * v for k, v in self.items()})

    def __add__(self: NodeMapT, other: NodeMapT, /) -> NodeMapT:
        if other.shape != self.shape:
            msg = f"shape mismatch: {self.shape} vs {other.shape}"
            raise ValueError(msg)
        return type(self)(self.shape, [*self.items(), *other.items()])

    def restrict(self: NodeMapT, keep: NodeSet | Callable[[AnyNode], bool], /) -> NodeMapT:
        """Values on ``keep`` only (a node set or a predicate)."""
        pred = keep.has if isinstance(keep, NodeSet) else keep
        return type(self)(self.shape, {k: v for k, v in self.items() if pred(k)})

    # ---------------------------------------------------------------
    # Dense conversion

    def to_dense(self) -> Float[Array, "..."]:
        """Heap-ordered dense array over the whole (bi)tree."""
        out = jnp.zeros(self.shape.dense_shape)
        if self.is_zero:
            return out
        index = self._heap_index()
        return out.at[index].set(jnp.asarray(list(self.data.values())))

    def _heap_index(self) -> tuple[Array, ...]:
        hi = self.shape.heap_index
        if self.shape.ndim == 2:  # noqa: PLR2004
            nodes: list[Node2] = list(self.data.keys())  # type: ignore[arg-type]
            return (
                jnp.asarray([hi(n.x) for n in nodes]),
                jnp.asarray([hi(n.y) for n in nodes]),
            )
        return (jnp.asarray([hi(n) for n in self.data]),)  # type: ignore[arg-type]

    # ---------------------------------------------------------------
    # Constructors

    @classmethod
    @dispatch.abstract
    def from_(cls: "type[AbstractNodeMap]", *args: Any, **kwargs: Any) -> "AbstractNodeMap":
        """Construct from another representation."""
        raise NotImplementedError  # pragma: no cover


class SparseFunction(AbstractNodeMap):
    """A non-negative function with finite support.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape
    >>> from bicap.potential import SparseFunction
    >>> o = Node1(0, 0)
    >>> f = SparseFunction(TreeShape(1), {Node2(o, o): 2.0})
    >>> f[Node2(o, o)], f[Node2(o, Node1(1, 0))]
    (2.0, 0.0)
    >>> f.norm_sq()
    4.0

    """

    shape: TreeShape
    entries: ImmutableMap[AnyNode, float] = eqx.field(converter=_canonical)

    @property
    def data(self) -> ImmutableMap[AnyNode, float]:
        return self.entries


class Measure(AbstractNodeMap):
    """A finite non-negative measure given by its atoms.

    Atoms may sit on interior vertices or on the truncated boundary (leaves,
    leaf pairs). Zero-mass atoms are dropped and repeated vertices merged.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape
    >>> from bicap.potential import Measure
    >>> a = Node2(Node1(1, 0), Node1(1, 0))
    >>> mu = Measure(TreeShape(1), [(a, 0.25), (a, 0.25)])
    >>> mu.total()
    0.5
    >>> mu.support().nodes == (a,)
    True

    """

    shape: TreeShape
    atoms: ImmutableMap[AnyNode, float] = eqx.field(converter=_canonical)

    @property
    def data(self) -> ImmutableMap[AnyNode, float]:
        return self.atoms


class PotentialField(eqx.Module):
    """Values of a potential at a queried set of vertices.

    Unlike `SparseFunction`, a missing vertex means "not queried".
    """

    shape: TreeShape
    values: ImmutableMap[AnyNode, float] = eqx.field(converter=ImmutableMap)

    def __getitem__(self, node: AnyNode, /) -> float:
        return self.values[node]

    def items(self) -> Iterable[tuple[AnyNode, float]]:
        return self.values.items()

    def min(self) -> float:
        return min(self.values.values(), default=0.0)

    def max(self) -> float:
        return max(self.values.values(), default=0.0)


# ===================================================================
# Constructors


@AbstractNodeMap.from_.dispatch
def from_(cls: type[AbstractNodeMap], obj: AbstractNodeMap, /) -> AbstractNodeMap:
    """Re-read another sparse map (e.g. a measure as a function).

    Examples
    --------
    >>> from bicap.bitree import Node1, TreeShape
    >>> from bicap.potential import Measure, SparseFunction
    >>> mu = Measure(TreeShape(1, ndim=1), {Node1(1, 1): 1.0})
    >>> SparseFunction.from_(mu).entries == mu.atoms
    True

    """
    if isinstance(obj, cls):
        return obj
    return cls(obj.shape, obj.data)


@AbstractNodeMap.from_.dispatch
def from_(  # noqa: F811
    cls: type[AbstractNodeMap], shape: TreeShape, dense: Array, /
) -> AbstractNodeMap:
    """Read a heap-ordered dense array; exact zeros are dropped.

    Examples
    --------
    >>> import jax.numpy as jnp
    >>> from bicap.bitree import TreeShape
    >>> from bicap.potential import Measure
    >>> mu = Measure.from_(TreeShape(1, ndim=1), jnp.array([0.0, 0.5, 0.0]))
    >>> dict(mu.atoms)
    {Node1(level=1, pos=0): 0.5}

    """
    if dense.shape != shape.dense_shape:
        msg = f"expected a dense array of shape {shape.dense_shape}, got {dense.shape}"
        raise ValueError(msg)
    index = jnp.nonzero(dense)
    values = dense[index].tolist()
    nodes = [shape.node_at(i) for i in index[0].tolist()]
    if shape.ndim == 2:  # noqa: PLR2004
        ys = [shape.node_at(i) for i in index[1].tolist()]
        nodes = [Node2(x, y) for x, y in zip(nodes, ys, strict=True)]  # type: ignore[misc]
    return cls(shape, dict(zip(nodes, values, strict=True)))


@AbstractNodeMap.from_.dispatch
def from_(  # noqa: F811
    cls: type[AbstractNodeMap], shape: TreeShape, data: Mapping[Any, Any], /
) -> AbstractNodeMap:
    return cls(shape, data)
