"""Test the trace checks and the subcapacitary constant."""

import math

import pytest

import bicap.sci as bs
from bicap.bitree import ROOT2, Node1, Node2, NodeSet, TreeShape
from bicap.potential import Measure, trace_norm_estimate


@pytest.fixture(scope="module")
def nu() -> Measure:
    shape = TreeShape(2)
    leaves = shape.leaves()
    return Measure(shape, {leaves[0]: 0.5, leaves[6]: 0.25, leaves[13]: 1.0})


class TestBoxMass:
    def test_overlapping_boxes_count_once(self, nu: Measure) -> None:
        a = Node1(1, 0)
        boxes = NodeSet([Node2(a, Node1(0, 0)), Node2(a, a)])
        assert bs.box_mass(nu, boxes) == bs.box_mass(nu, NodeSet([Node2(a, Node1(0, 0))]))

    def test_root_box_is_everything(self, nu: Measure) -> None:
        assert math.isclose(bs.box_mass(nu, NodeSet([ROOT2])), nu.total())


class TestTraceUpperBound:
    """Test `bicap.sci.trace_upper_bound_check`."""

    @pytest.mark.parametrize(
        "target",
        [
            NodeSet([ROOT2]),
            NodeSet([Node2(Node1(1, 0), Node1(1, 0))]),
            NodeSet([Node2(Node1(2, 3), Node1(1, 1)), Node2(Node1(1, 0), Node1(2, 0))]),
        ],
    )
    def test_holds(self, nu: Measure, target: NodeSet) -> None:
        check = bs.trace_upper_bound_check(nu, target)
        assert check.holds
        assert check.mass <= check.norm_sq * check.cap * (1 + 1e-6)

    def test_reuses_a_given_norm(self, nu: Measure) -> None:
        norm_sq = trace_norm_estimate(nu).norm_sq
        check = bs.trace_upper_bound_check(nu, NodeSet([ROOT2]), norm_sq=norm_sq)
        assert check.norm_sq == norm_sq

    def test_default_norm_adds_the_residual(self, nu: Measure) -> None:
        est = trace_norm_estimate(nu)
        check = bs.trace_upper_bound_check(nu, NodeSet([ROOT2]))
        assert math.isclose(check.norm_sq, est.norm_sq + est.residual, rel_tol=1e-12)
        assert check.norm_sq >= est.norm_sq

    def test_an_underestimated_norm_fails(self, nu: Measure) -> None:
        check = bs.trace_upper_bound_check(nu, NodeSet([ROOT2]), norm_sq=1e-3)
        assert not check.holds


class TestSubcap:
    """Test `bicap.sci.subcap_constant`."""

    def test_single_box(self) -> None:
        a = Node1(1, 0)
        res = bs.subcap_constant(Measure(TreeShape(1), {Node2(a, a): 0.5}))
        assert res.constant == 2.0
        assert res.collection.nodes == (Node2(a, a),)

    @pytest.mark.parametrize("strategy", ["random-collections", "levelset-guided"])
    def test_strategies_never_lose_to_single_box(self, nu: Measure, strategy: str) -> None:
        base = bs.subcap_constant(nu)
        res = bs.subcap_constant(nu, strategy, seed=3, count=8)
        assert res.constant >= base.constant
        assert res.evaluated > base.evaluated

    def test_bounded_by_the_trace_norm(self, nu: Measure) -> None:
        res = bs.subcap_constant(nu, "random-collections", seed=1, count=8)
        assert res.constant <= trace_norm_estimate(nu).norm_sq * (1 + 1e-4)

    def test_zero_measure(self) -> None:
        res = bs.subcap_constant(Measure(TreeShape(1), {}))
        assert res.constant == 0.0
        assert res.evaluated == 0

    def test_unknown_strategy(self, nu: Measure) -> None:
        with pytest.raises((ValueError, TypeError)):
            bs.subcap_constant(nu, "everything")
