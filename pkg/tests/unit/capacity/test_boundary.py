"""Test boundary projections, disintegration and the grandparent ratio."""

import math

import pytest

import bicap.capacity as bc
from bicap.bitree import ROOT2, Node1, Node2, NodeSet, TreeShape
from bicap.potential import Measure, potential


class TestBoundary:
    def test_projection_of_a_box(self) -> None:
        shape = TreeShape(3)
        box = Node2(Node1(1, 1), Node1(2, 0))
        proj = bc.boundary_projection(NodeSet([box]))
        assert proj.kind == "boundary"
        assert len(proj.materialize(shape)) == 4 * 2

    def test_boundary_capacity_is_at_most_the_box(self) -> None:
        shape = TreeShape(2)
        box = NodeSet([Node2(Node1(1, 0), Node1(1, 1))])
        assert bc.capacity(shape, bc.boundary_projection(box)).cap <= bc.capacity(shape, box).cap * (1 + 1e-7)

    def test_disintegration_preserves_mass(self) -> None:
        shape = TreeShape(3)
        mu = Measure(shape, {ROOT2: 0.5, Node2(Node1(2, 1), Node1(3, 4)): 0.25})
        mub = bc.disintegrate_to_boundary(mu)
        assert math.isclose(mub.total(), mu.total(), rel_tol=1e-15)
        assert all(n.x.level == n.y.level == 3 for n in mub)

    def test_disintegration_dominates_the_potential(self) -> None:
        shape = TreeShape(2)
        a = Node2(Node1(1, 0), Node1(0, 0))
        mu = Measure(shape, {a: 1.0})
        mub = bc.disintegrate_to_boundary(mu)
        # spreading mass down never lowers the potential
        for node in shape.nodes()[::4]:
            assert potential(mub, node) >= potential(mu, node) - 1e-12

    @pytest.mark.parametrize(
        ("alpha", "beta", "expected"),
        [
            (Node1(1, 0), Node1(1, 1), 1.0),
            (Node1(0, 0), Node1(0, 0), 1.875),
        ],
    )
    def test_martingale_ratio(self, alpha: Node1, beta: Node1, expected: float) -> None:
        assert math.isclose(
            bc.martingale_ratio_check(alpha, beta, TreeShape(3, ndim=1)), expected
        )


class TestGrandparent:
    def test_single_point(self) -> None:
        a = Node1(1, 0)
        report = bc.grandparent_ratio([Node2(a, a)], TreeShape(2))
        assert math.isclose(report.ratio, 4.0, rel_tol=1e-8)

    def test_ratio_is_at_least_one(self) -> None:
        shape = TreeShape(3)
        pts = [Node2(Node1(2, 1), Node1(3, 5)), Node2(Node1(3, 7), Node1(1, 0))]
        assert bc.grandparent_ratio(pts, shape).ratio >= 1.0 - 1e-8

    def test_empty(self) -> None:
        with pytest.raises(ValueError, match="point"):
            bc.grandparent_ratio([], TreeShape(2))
