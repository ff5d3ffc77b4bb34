"""Strong capacitary inequality reports."""

__all__ = ["SciRow", "SciReport", "sci_ratio"]

import logging
import math
from collections.abc import Mapping
from typing import Any

import equinox as eqx

from .levelsets import LevelSetFamily, level_sets
from bicap.capacity import AbstractCapacitySolver
from bicap.potential import AbstractNodeMap

logger = logging.getLogger(__name__)


class SciRow(eqx.Module):
    """Contribution of one level ``k``."""

    k: int
    cap: float
    term: float
    """``4**k cap E_k``; the lowest level also carries all levels below it."""

    cumulative: float


class SciReport(eqx.Module):
    """Both sides of ``sum_k 4**k cap E_k <= C |f|^2`` for one function.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, TreeShape
    >>> from bicap.potential import SparseFunction
    >>> from bicap.sci import sci_ratio
    >>> rep = sci_ratio(SparseFunction(TreeShape(1), {ROOT2: 1.0}))
    >>> round(rep.ratio, 9), round(16 / 27, 9)
    (0.592592593, 0.592592593)

    """

    norm_sq: float
    total: float
    rows: tuple[SciRow, ...]
    certified: bool
    family: LevelSetFamily = eqx.field(repr=False)

    @property
    def ratio(self) -> float:
        return self.total / self.norm_sq


def sci_ratio(
    f: AbstractNodeMap,
    /,
    *,
    strict: bool = False,
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
) -> SciReport:
    """``sum_k 4**k cap E_k / |f|^2`` over the level sets of ``I f``.

    Levels below the lowest computed one all share its boundary projection,
    so their geometric tail ``(4/3) 4**k_min cap E_k_min`` is added to the
    first row.
    """
    if f.is_zero:
        msg = "sci_ratio needs a non-zero function"
        raise ValueError(msg)
    family = level_sets(f, strict=strict, solver=solver)
    rows: list[SciRow] = []
    cumulative = 0.0
    for i, lv in enumerate(family):
        weight = math.ldexp(1.0, 2 * lv.k)
        term = (4.0 / 3.0 if i == 0 else 1.0) * weight * lv.cap
        cumulative += term
        rows.append(SciRow(k=lv.k, cap=lv.cap, term=term, cumulative=cumulative))
    norm_sq = f.norm_sq()
    report = SciReport(
        norm_sq=norm_sq,
        total=cumulative,
        rows=tuple(rows),
        certified=family.certified,
        family=family,
    )
    logger.info("sci: total=%.12g norm_sq=%.12g ratio=%.6g", cumulative, norm_sq, report.ratio)
    return report
