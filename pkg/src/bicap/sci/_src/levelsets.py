"""Level sets of Hardy potentials and their capacities."""

__all__ = ["LevelSet", "LevelSetFamily", "level_sets", "dyadic_range"]

import logging
import math
from collections.abc import Iterator, Mapping
from typing import Any

import equinox as eqx
import jax.numpy as jnp
from jaxtyping import Array, Bool

from bicap.bitree import NodeSet, TreeShape
from bicap.capacity import AbstractCapacitySolver, CapacityResult, capacity
from bicap.potential import AbstractNodeMap, SparseFunction, dense_ok, hardy_dense, parent_mask
from bicap.utils import parallel_map

logger = logging.getLogger(__name__)


class LevelSet(eqx.Module):
    """One level ``{I f >= 2**k}`` and its boundary projection."""

    k: int
    generators: NodeSet
    """Maximal vertices of the level set (a down-set)."""

    boundary: NodeSet
    """Boundary projection ``E_k`` (kind ``"boundary"``)."""

    cap: float
    """``cap E_k``."""

    certified: bool


class LevelSetFamily(eqx.Module):
    """Level sets of ``I f`` for ``k = k_min .. k_max``, increasing ``k``.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, TreeShape
    >>> from bicap.potential import SparseFunction
    >>> from bicap.sci import level_sets
    >>> fam = level_sets(SparseFunction(TreeShape(1), {ROOT2: 1.0}))
    >>> fam.ks, round(fam[0].cap, 9)
    ((0,), 0.444444444)

    """

    shape: TreeShape
    levels: tuple[LevelSet, ...]
    strict: bool = eqx.field(default=False, static=True)

    def __len__(self) -> int:
        return len(self.levels)

    def __iter__(self) -> Iterator[LevelSet]:  # type: ignore[override]
        return iter(self.levels)

    def __getitem__(self, i: int, /) -> LevelSet:
        return self.levels[i]

    @property
    def ks(self) -> tuple[int, ...]:
        return tuple(lv.k for lv in self.levels)

    @property
    def is_empty(self) -> bool:
        return not self.levels

    @property
    def certified(self) -> bool:
        return all(lv.certified for lv in self.levels)


def dyadic_range(low: float, high: float, /) -> tuple[int, int]:
    """``(k_min, k_max)`` with ``2**k_min <= low`` and ``2**k_max >= high``.

    Examples
    --------
    >>> from bicap.sci import dyadic_range
    >>> dyadic_range(1.0, 1.0), dyadic_range(0.3, 5.0)
    ((0, 0), (-2, 3))

    """
    _, e_low = math.frexp(low)
    m_high, e_high = math.frexp(high)
    return e_low - 1, e_high - 1 if m_high == 0.5 else e_high  # noqa: PLR2004


def _generator_mask(mask: Bool[Array, "..."]) -> Bool[Array, "..."]:
    out = mask
    for axis in range(mask.ndim):
        out = out & ~parent_mask(mask, axis=axis)
    return out


def _nodes_of(mask: Bool[Array, "..."], shape: TreeShape) -> NodeSet:
    return SparseFunction.from_(shape, mask.astype(float)).support()


def level_sets(
    f: AbstractNodeMap,
    /,
    *,
    strict: bool = False,
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
) -> LevelSetFamily:
    """Level sets ``{I f >= 2**k}`` (``> 2**k`` if ``strict``) with capacities.

    The ``k`` range is read off the positive values of ``I f`` on the
    boundary; every level below ``k_min`` has the same boundary projection as
    ``k_min``. The capacities are solved concurrently.
    """
    shape = f.shape
    if f.is_zero:
        return LevelSetFamily(shape, (), strict=strict)
    if not dense_ok(shape):
        msg = f"{shape} is too large for dense level sets"
        raise ValueError(msg)

    hardy = hardy_dense(f.to_dense(), depth=shape.depth)
    leaf_block = (1 << shape.depth) - 1
    leaves = hardy[(slice(leaf_block, None),) * shape.ndim]
    low = float(jnp.min(jnp.where(leaves > 0, leaves, jnp.inf)))
    k_min, k_max = dyadic_range(low, float(jnp.max(hardy)))
    if strict and low == math.ldexp(1.0, k_min):
        k_min -= 1

    pending: list[tuple[int, NodeSet]] = []
    for k in range(k_min, k_max + 1):
        threshold = math.ldexp(1.0, k)
        mask = hardy > threshold if strict else hardy >= threshold
        pending.append((k, _nodes_of(_generator_mask(mask), shape)))

    def solve(item: tuple[int, NodeSet]) -> CapacityResult:
        boundary = NodeSet(item[1].nodes, kind="boundary")
        return capacity(shape, boundary, solver=solver)

    results = parallel_map(solve, pending)
    levels = tuple(
        LevelSet(
            k=k,
            generators=NodeSet(gens.nodes, kind="downset"),
            boundary=NodeSet(gens.nodes, kind="boundary"),
            cap=res.cap,
            certified=res.certified,
        )
        for (k, gens), res in zip(pending, results, strict=True)
    )
    logger.info(
        "level sets: k in [%d, %d], caps=%s",
        k_min,
        k_max,
        [round(lv.cap, 6) for lv in levels],
    )
    return LevelSetFamily(shape, levels, strict=strict)
