"""Decay of restricted energies of measures with large potential."""

__all__ = ["DecayRow", "EnergyDecayTable", "energy_decay"]

import logging
from collections.abc import Iterable

import equinox as eqx
import jax.numpy as jnp

from bicap.potential import AbstractNodeMap, coI_dense, dense_ok, hardy_dense
from bicap.utils.exceptions import HypothesisError

logger = logging.getLogger(__name__)

# Share of the energy carried where V >= delta, at the decay witness.
_WITNESS_SHARE = 0.9


class DecayRow(eqx.Module):
    delta: float
    restricted_energy: float
    normalized: float
    """``E_delta[mu] / (delta**(1/3) E[mu])``."""


class EnergyDecayTable(eqx.Module):
    """Restricted energies of one measure over a grid of ``delta``.

    Examples
    --------
    >>> from bicap.bitree import Node1, Node2, TreeShape
    >>> from bicap.potential import Measure
    >>> from bicap.rearrangement import energy_decay
    >>> a = Node1(1, 0)
    >>> table = energy_decay(Measure(TreeShape(1), {Node2(a, a): 0.25}), [0.25])
    >>> table.energy, table.rows[0].restricted_energy, round(table.rows[0].normalized, 3)
    (0.25, 0.0625, 0.397)

    """

    energy: float
    rows: tuple[DecayRow, ...]
    floor: float
    """Smallest potential over vertices where ``I* mu > 0``."""

    witness: float | None
    """Largest grid ``delta`` with ``E - E_delta >= 0.9 E``, if any."""

    @property
    def reaches_floor(self) -> bool:
        return any(row.delta < self.floor for row in self.rows)

    @property
    def witness_holds(self) -> bool:
        """A witness exists whenever the grid reaches below the floor."""
        return self.witness is not None or not self.reaches_floor

    @property
    def max_normalized(self) -> float:
        return max((row.normalized for row in self.rows), default=0.0)

    def is_monotone(self) -> bool:
        """``E_delta`` is non-decreasing in ``delta``."""
        values = [row.restricted_energy for row in self.rows]
        return all(a <= b for a, b in zip(values, values[1:], strict=False))


def energy_decay(
    mu: AbstractNodeMap, deltas: Iterable[float], /, *, atol: float = 1e-6
) -> EnergyDecayTable:
    """Tabulate ``E_delta[mu]`` for a measure with ``V^mu >= 1`` on its support.

    ``atol`` absorbs the solver tolerance of numerically computed equilibrium
    measures. Rows are sorted by ``delta``.

    Raises
    ------
    HypothesisError
        If ``V^mu < 1 - atol`` somewhere on ``supp mu``.
    ValueError
        If a ``delta`` is not positive.
    """
    grid = sorted(float(d) for d in deltas)
    if any(d <= 0 for d in grid):
        msg = f"deltas must be positive, got {grid}"
        raise ValueError(msg)
    shape = mu.shape
    if not dense_ok(shape):
        msg = f"{shape} is too large for a dense evaluation"
        raise ValueError(msg)

    dense = mu.to_dense()
    co = coI_dense(dense, depth=shape.depth)
    pot = hardy_dense(co, depth=shape.depth)
    if not mu.is_zero:
        low = float(jnp.min(jnp.where(dense > 0, pot, jnp.inf)))
        if low < 1 - atol:
            msg = f"V^mu drops to {low} < 1 on supp mu"
            raise HypothesisError(msg)

    sq = co * co
    total = float(jnp.sum(sq))
    floor = float(jnp.min(jnp.where(co > 0, pot, jnp.inf)))
    rows = []
    witness = None
    for delta in grid:
        e_delta = float(jnp.sum(jnp.where(pot <= delta, sq, 0.0)))
        normalized = e_delta / (delta ** (1 / 3) * total) if total > 0 else 0.0
        rows.append(DecayRow(delta=delta, restricted_energy=e_delta, normalized=normalized))
        if total > 0 and total - e_delta >= _WITNESS_SHARE * total:
            witness = delta
    table = EnergyDecayTable(energy=total, rows=tuple(rows), floor=floor, witness=witness)
    logger.info(
        "energy decay: E=%.6g, max normalized=%.6g, witness=%s",
        total,
        table.max_normalized,
        witness,
    )
    return table
