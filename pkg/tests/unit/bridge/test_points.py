"""Test the assignment of bidisc points to tree vertices."""

import math

import pytest

import bicap.bridge as bb
from bicap.bitree import Node1, Node2
from bicap.utils.exceptions import BicapWarning


class TestBidiscAtom:
    """Test `bicap.bridge.BidiscAtom`."""

    def test_angles_are_reduced(self) -> None:
        atom = bb.BidiscAtom((1.0, -math.pi / 2), (0.5, 4 * math.pi), 1.0)
        assert math.isclose(atom.z1[1], 3 * math.pi / 2)
        assert atom.z2[1] == 0.0

    def test_from_complex(self) -> None:
        atom = bb.BidiscAtom.from_(-1.0, 1j, 2)
        assert atom.z1 == (1.0, math.pi)
        assert math.isclose(atom.z2[1], math.pi / 2)
        assert atom.mass == 2.0

    def test_from_record(self) -> None:
        atom = bb.BidiscAtom.from_({"z1": [0.5, 1.0], "z2": [1.0, 0.0], "mass": 0.25})
        assert atom == bb.BidiscAtom((0.5, 1.0), (1.0, 0.0), 0.25)

    @pytest.mark.parametrize(
        ("z1", "mass", "match"), [((1.5, 0.0), 1.0, "radii"), ((0.5, 0.0), -1.0, "mass")]
    )
    def test_invalid(self, z1: tuple[float, float], mass: float, match: str) -> None:
        with pytest.raises(ValueError, match=match):
            bb.BidiscAtom(z1, (0.0, 0.0), mass)


class TestNodeOfPoint:
    """Test `bicap.bridge.node_of_point`."""

    @pytest.mark.parametrize(
        ("z", "expected"),
        [
            ((0.0, 1.0), Node1(0, 0)),
            ((0.49, 4.0), Node1(0, 0)),
            ((0.5, 0.0), Node1(1, 0)),
            ((0.5, math.pi), Node1(1, 1)),
            ((0.75, math.pi / 2), Node1(2, 1)),
            ((1.0, 0.0), Node1(4, 0)),
            ((1.0, 2 * math.pi - 1e-9), Node1(4, 15)),
            ((1 - 2**-3, 3.0), Node1(3, 3)),
        ],
    )
    def test_closed_on_the_left(self, z: tuple[float, float], expected: Node1) -> None:
        assert bb.node_of_point(z, 4) == expected

    def test_deep_points_go_to_leaves(self) -> None:
        assert bb.node_of_point((1 - 2**-10, 0.0), 4).level == 4

    def test_deep_tree(self) -> None:
        node = bb.node_of_point((1.0, math.pi), 60)
        assert node == Node1(60, 1 << 59)

    def test_box_map_agrees(self) -> None:
        boxes = bb.CarlesonBoxMap(4)
        for z in [(0.3, 1.0), (0.6, 2.5), (0.9, 5.0), (1.0, 6.0)]:
            node = boxes.node_of(z)
            low, high = boxes.band(node)
            a, b = boxes.arc(node)
            assert low <= z[0] < high or (z[0] == 1.0 and high == 1.0)
            assert a <= z[1] < b
            assert boxes.contains(node, z)


class TestPullback:
    """Test `bicap.bridge.pullback_measure`."""

    def test_mass_is_preserved(self) -> None:
        atoms = bb.random_atoms(3, 20)
        mu = bb.pullback_measure(atoms, 5)
        assert math.isclose(mu.total(), math.fsum(a.mass for a in atoms), rel_tol=1e-12)

    def test_atoms_in_one_box_merge(self) -> None:
        atoms = [bb.BidiscAtom((1.0, 0.1), (1.0, 0.1), 1.0), bb.BidiscAtom((1.0, 0.2), (1.0, 0.2), 2.0)]
        mu = bb.pullback_measure(atoms, 2)
        assert dict(mu.atoms) == {Node2(Node1(2, 0), Node1(2, 0)): 3.0}

    def test_zero_mass_atoms_warn(self) -> None:
        atoms = [bb.BidiscAtom((0, 0), (0, 0), 0.0), bb.BidiscAtom((0, 0), (0, 0), 1.0)]
        with pytest.warns(BicapWarning, match="zero-mass"):
            mu = bb.pullback_measure(atoms, 2)
        assert mu.total() == 1.0

    def test_uniform_grid(self) -> None:
        mu = bb.pullback_measure(bb.uniform_boundary_grid(3), 3)
        assert len(mu) == 64
        assert len(set(mu.atoms.values())) == 1

    def test_random_atoms_are_seeded(self) -> None:
        assert bb.random_atoms(5, 4) == bb.random_atoms(5, 4)
        assert bb.random_atoms(5, 4) != bb.random_atoms(6, 4)
        on_circle = bb.random_atoms(0, 10, boundary_fraction=1.0)
        assert all(a.z1[0] == 1.0 and a.z2[0] == 1.0 for a in on_circle)
