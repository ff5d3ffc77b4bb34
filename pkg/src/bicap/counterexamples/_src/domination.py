"""A measure pair for which the domination principle fails on the bitree."""

__all__ = ["DominationFailure", "domination_failure"]

import logging
import math

import equinox as eqx

from .staircase import StaircaseConfig, StaircaseReport, build_staircase
from bicap.bitree import ROOT2, Node2
from bicap.potential import Measure, potential

logger = logging.getLogger(__name__)

# Largest staircase tried before giving up.
_MAX_STEPS = 1 << 12


class DominationFailure(eqx.Module):
    """``V^nu >= V^mu`` on ``supp mu`` yet ``V^mu(witness) > lambda sup V^nu``.

    ``nu`` is the unit mass at the root, so ``V^nu = 1`` everywhere.
    """

    lam: float
    staircase: StaircaseReport
    nu: Measure
    witness: Node2
    witness_potential: float

    @property
    def mu(self) -> Measure:
        return self.staircase.equilibrium


def domination_failure(
    lam: float, /, *, base: int = 20, start: int | None = None
) -> DominationFailure:
    """Find a staircase with ``V^mu(omega) > lambda``.

    The search starts at ``n = start`` steps, by default
    ``base (floor(lambda) + 1)``, and doubles ``n`` until the potential at
    ``omega`` exceeds ``lambda``. For ``base = 20`` the first staircase
    already gives ``V(omega) >= 9 n / 50``.
    Small bases grow ``V(omega)`` slowly (``4/3``, ``5/3``, ... for ``base = 2``)
    and each step solves an ``(n + 1)``-atom Gram system, so large ``lambda``
    with a small base is expensive.

    Raises
    ------
    ValueError
        If ``lambda <= 0``, ``start < 1`` or no staircase up to 4096 steps is
        large enough.

    Examples
    --------
    >>> from bicap.counterexamples import domination_failure
    >>> out = domination_failure(1.0, base=2, start=1)
    >>> out.staircase.config.steps, round(out.witness_potential, 9)
    (1, 1.333333333)
    >>> out = domination_failure(1.0)
    >>> out.staircase.config.steps, out.witness_potential > 7
    (40, True)

    """
    if not lam > 0:
        msg = f"lambda must be positive, got {lam}"
        raise ValueError(msg)
    steps = base * (math.floor(lam) + 1) if start is None else start
    if steps < 1:
        msg = f"start must be >= 1, got {steps}"
        raise ValueError(msg)
    while steps <= _MAX_STEPS:
        report = build_staircase(StaircaseConfig(base, steps))
        if report.omega_potential > lam:
            break
        logger.debug("n=%d reaches V(omega)=%.6g <= %g", steps, report.omega_potential, lam)
        steps *= 2
    else:
        msg = f"no staircase with base {base} and at most {_MAX_STEPS} steps exceeds {lam}"
        raise ValueError(msg)

    shape = report.config.shape
    witness = report.config.omega
    out = DominationFailure(
        lam=float(lam),
        staircase=report,
        nu=Measure(shape, {ROOT2: 1.0}),
        witness=witness,
        witness_potential=potential(report.equilibrium, witness),
    )
    logger.info(
        "domination failure: lambda=%g, n=%d, V^mu(omega)=%.6g",
        lam,
        steps,
        out.witness_potential,
    )
    return out
