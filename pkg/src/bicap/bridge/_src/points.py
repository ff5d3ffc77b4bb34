"""Atoms on the closed bidisc and their dyadic Carleson boxes."""

__all__ = [
    "BidiscAtom",
    "CarlesonBoxMap",
    "node_of_point",
    "pullback_measure",
    "uniform_boundary_grid",
    "random_atoms",
]

import cmath
import math
import warnings
from collections.abc import Iterable
from typing import Any

import equinox as eqx
import jax.random as jr
from plum import dispatch

from bicap.bitree import Node1, Node2, TreeShape
from bicap.potential import Measure
from bicap.utils.exceptions import BicapWarning

TAU = 2 * math.pi

# Angular resolution of the arc assignment, in bits of a full turn.
_ARC_BITS = 48


def _polar(coord: tuple[float, float]) -> tuple[float, float]:
    r, theta = (float(c) for c in coord)
    return r, theta % TAU


class BidiscAtom(eqx.Module):
    """A point mass at ``(z1, z2)`` of the closed bidisc, in polar form.

    Angles are reduced to ``[0, 2 pi)``.

    Examples
    --------
    >>> import math
    >>> from bicap.bridge import BidiscAtom
    >>> atom = BidiscAtom((1.0, -math.pi), (0.5, 0.0), 2.0)
    >>> atom.z1
    (1.0, 3.141592653589793)
    >>> atom = BidiscAtom.from_(0.5j, 0.0, 1.0)
    >>> atom.z1[0], round(atom.z1[1], 12)
    (0.5, 1.570796326795)

    """

    z1: tuple[float, float] = eqx.field(converter=_polar)
    z2: tuple[float, float] = eqx.field(converter=_polar)
    mass: float = eqx.field(converter=float)

    def __check_init__(self) -> None:
        for r, _ in (self.z1, self.z2):
            if not 0 <= r <= 1:
                msg = f"radii must lie in [0, 1], got {r}"
                raise ValueError(msg)
        if not (math.isfinite(self.mass) and self.mass >= 0):
            msg = f"mass must be finite and non-negative, got {self.mass}"
            raise ValueError(msg)

    def complex(self) -> tuple[complex, complex]:
        """``(z1, z2)`` as complex numbers."""
        return cmath.rect(*self.z1), cmath.rect(*self.z2)

    @classmethod
    @dispatch.abstract
    def from_(cls: "type[BidiscAtom]", *args: Any, **kwargs: Any) -> "BidiscAtom":
        """Construct from another representation."""
        raise NotImplementedError  # pragma: no cover


@BidiscAtom.from_.dispatch
def from_(
    cls: type[BidiscAtom], z1: complex | float, z2: complex | float, mass: float | int, /
) -> BidiscAtom:
    """From two complex coordinates."""
    p1, p2 = cmath.polar(complex(z1)), cmath.polar(complex(z2))
    # |z| = 1 up to rounding is the boundary
    r1, r2 = min(p1[0], 1.0), min(p2[0], 1.0)
    return cls((r1, p1[1]), (r2, p2[1]), mass)


@BidiscAtom.from_.dispatch
def from_(cls: type[BidiscAtom], obj: dict, /) -> BidiscAtom:  # type: ignore[type-arg]  # noqa: F811
    """From the atom-list record ``{"z1": [r, theta], "z2": [r, theta], "mass": m}``."""
    return cls(tuple(obj["z1"]), tuple(obj["z2"]), obj["mass"])


def _band(r: float, depth: int) -> int:
    """Level ``j`` with ``1 - 2**-j <= r < 1 - 2**-(j+1)``, clamped to ``depth``."""
    s = 1.0 - r
    if s <= 0:
        return depth
    m, e = math.frexp(s)
    level = 1 - e if m == 0.5 else -e  # noqa: PLR2004
    return min(level, depth)


def _arc(theta: float, level: int) -> int:
    """Index of the level-``level`` dyadic arc holding ``theta``."""
    q = round(theta / TAU * (1 << _ARC_BITS)) % (1 << _ARC_BITS)
    if level <= _ARC_BITS:
        return q >> (_ARC_BITS - level)
    return q << (level - _ARC_BITS)


def node_of_point(z: tuple[float, float], depth: int, /) -> Node1:
    """The tree vertex whose half-box ``Q`` holds ``z = (r, theta)``.

    Bands ``[1 - 2**-j, 1 - 2**-(j+1))`` and arcs ``[2 pi l / 2**j,
    2 pi (l + 1) / 2**j)`` are closed on the left, so a point on a dividing
    circle goes to the larger level and a point on a dividing ray to the larger
    arc index. Points with ``1 - r <= 2**-depth`` (the boundary included) go to
    leaves. Angles are compared in fixed point with ``2**-48`` turn
    resolution, which makes the assignment platform independent.

    Examples
    --------
    >>> from bicap.bridge import node_of_point
    >>> node_of_point((0.0, 1.0), 4)
    Node1(level=0, pos=0)
    >>> node_of_point((1.0, 0.0), 4)
    Node1(level=4, pos=0)
    >>> node_of_point((1 - 2**-3, 3.0), 5)
    Node1(level=3, pos=3)

    """
    r, theta = _polar(z)
    level = _band(r, depth)
    return Node1(level, _arc(theta, level))


class CarlesonBoxMap(eqx.Module):
    """The half-boxes ``Q(alpha)`` and arcs ``J(alpha)`` of a depth-``L`` tree.

    Examples
    --------
    >>> from bicap.bitree import Node1
    >>> from bicap.bridge import CarlesonBoxMap
    >>> boxes = CarlesonBoxMap(3)
    >>> boxes.band(Node1(1, 0))
    (0.5, 0.75)
    >>> boxes.band(Node1(3, 2))
    (0.875, 1.0)
    >>> boxes.contains(Node1(2, 1), (0.8, 2.0))
    True

    """

    depth: int = eqx.field(static=True)

    @property
    def shape(self) -> TreeShape:
        return TreeShape(self.depth, ndim=1)

    def node_of(self, z: tuple[float, float], /) -> Node1:
        return node_of_point(z, self.depth)

    def band(self, node: Node1, /) -> tuple[float, float]:
        """Radial extent ``[low, high)`` of ``Q(node)``; leaves reach ``r = 1``."""
        low = 1.0 - math.ldexp(1.0, -node.level)
        high = 1.0 if node.level >= self.depth else 1.0 - math.ldexp(1.0, -node.level - 1)
        return low, high

    def arc(self, node: Node1, /) -> tuple[float, float]:
        """Angular extent ``[low, high)`` of ``J(node)``."""
        width = TAU / (1 << node.level)
        return node.pos * width, (node.pos + 1) * width

    def contains(self, node: Node1, z: tuple[float, float], /) -> bool:
        return self.node_of(z) == node


def pullback_measure(atoms: Iterable[BidiscAtom], depth: int, /) -> Measure:
    """``mu~(alpha) = mu(Q(alpha_x) x Q(alpha_y))`` on the depth-``L`` bitree.

    Atoms are aggregated in input order; zero-mass atoms are dropped with a
    `BicapWarning`.

    Examples
    --------
    >>> from bicap.bridge import BidiscAtom, pullback_measure
    >>> mu = pullback_measure([BidiscAtom((0, 0), (0, 0), 1.0)], 3)
    >>> dict(mu.atoms)
    {Node2(x=Node1(level=0, pos=0), y=Node1(level=0, pos=0)): 1.0}

    """
    entries: list[tuple[Node2, float]] = []
    dropped = 0
    for atom in atoms:
        if atom.mass == 0:
            dropped += 1
            continue
        node = Node2(node_of_point(atom.z1, depth), node_of_point(atom.z2, depth))
        entries.append((node, atom.mass))
    if dropped:
        warnings.warn(f"dropped {dropped} zero-mass atoms", BicapWarning, stacklevel=2)
    return Measure(TreeShape(depth), entries)


def uniform_boundary_grid(depth: int, /, total: float = 1.0) -> list[BidiscAtom]:
    """Equal boundary atoms at the centres of the ``2**L x 2**L`` leaf arcs.

    Examples
    --------
    >>> from bicap.bridge import pullback_measure, uniform_boundary_grid
    >>> mu = pullback_measure(uniform_boundary_grid(2), 2)
    >>> len(mu), mu.total()
    (16, 1.0)

    """
    n = 1 << depth
    mass = total / (n * n)
    centres = [TAU * (l + 0.5) / n for l in range(n)]
    return [BidiscAtom((1.0, a), (1.0, b), mass) for a in centres for b in centres]


def random_atoms(
    seed: int, count: int, /, *, boundary_fraction: float = 0.5
) -> list[BidiscAtom]:
    """Seeded atoms with uniform angles and masses in ``(0, 1]``.

    A ``boundary_fraction`` share of the coordinates sits on the circle, the
    rest at uniform radii.
    """
    k_r, k_b, k_t, k_m = jr.split(jr.key(seed), 4)
    radii = jr.uniform(k_r, (count, 2))
    on_circle = jr.uniform(k_b, (count, 2)) < boundary_fraction
    radii = radii * ~on_circle + on_circle
    thetas = jr.uniform(k_t, (count, 2), maxval=TAU)
    masses = 1.0 - jr.uniform(k_m, (count,))
    return [
        BidiscAtom((r[0], t[0]), (r[1], t[1]), m)
        for r, t, m in zip(radii.tolist(), thetas.tolist(), masses.tolist(), strict=True)
    ]
