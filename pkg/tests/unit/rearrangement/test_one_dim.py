"""Test the one-tree rearrangement."""

import math

import pytest

import bicap.rearrangement as br
from bicap.bitree import ROOT1, Node1, NodeSet, TreeShape
from bicap.capacity import capacity_tree_exact
from bicap.potential import Measure, SparseFunction
from bicap.utils.exceptions import HypothesisError


@pytest.fixture(scope="module")
def tree() -> TreeShape:
    return TreeShape(5, ndim=1)


@pytest.fixture(scope="module")
def F() -> NodeSet:
    # two leaves in opposite halves: cap = 2/7 < 1/3
    return NodeSet([Node1(5, 3), Node1(5, 28)])


class TestStoppingSet:
    def test_sandwich(self, tree: TreeShape, F: NodeSet) -> None:
        rho = capacity_tree_exact(tree, F).equilibrium
        for delta in (0.1, 0.2, 1 / 3):
            stop = br.stopping_set(rho, delta)
            assert stop.sandwich_holds()
            assert stop.nodes.generators().nodes == stop.nodes.nodes

    def test_nothing_above_the_top(self, tree: TreeShape, F: NodeSet) -> None:
        rho = capacity_tree_exact(tree, F).equilibrium
        assert br.stopping_set(rho, 1.5).nodes.is_empty


class TestRearrange1D:
    """Test `bicap.rearrangement.rearrange_1d` with `certify_1d`."""

    @pytest.mark.parametrize("delta", [0.3, 1 / 3])
    def test_dominates_on_F(self, tree: TreeShape, F: NodeSet, delta: float) -> None:
        f = SparseFunction(tree, {ROOT1: 1.5})
        sigma = br.rearrange_1d(F, f, delta)
        cert = br.certify_1d(F, f, sigma, delta)
        assert cert.holds(atol=1e-9)
        assert cert.piece_min >= 1 - 2 * delta - 1e-12
        assert sigma.support().nodes == F.nodes

    def test_empty_inputs(self, tree: TreeShape, F: NodeSet) -> None:
        assert br.rearrange_1d(F, SparseFunction(tree, {}), 0.3).is_zero
        assert br.rearrange_1d(NodeSet([]), SparseFunction(tree, {ROOT1: 1.0}), 0.3).is_zero

    def test_hypothesis(self, tree: TreeShape, F: NodeSet) -> None:
        f = SparseFunction(tree, {Node1(5, 3): 1.0})
        with pytest.raises(HypothesisError, match="delta"):
            br.rearrange_1d(F, f, 1 / 3)

    @pytest.mark.parametrize("delta", [0.0, 0.5])
    def test_delta_range(self, tree: TreeShape, F: NodeSet, delta: float) -> None:
        with pytest.raises(ValueError, match="delta"):
            br.rearrange_1d(F, SparseFunction(tree, {ROOT1: 1.0}), delta)

    def test_F_must_be_leaves(self, tree: TreeShape) -> None:
        with pytest.raises(ValueError, match="leaf"):
            br.rearrange_1d(NodeSet([Node1(2, 0)]), SparseFunction(tree, {ROOT1: 1.0}), 0.3)

    def test_downset_F(self, tree: TreeShape) -> None:
        # a down-set target is read through its leaves
        F = NodeSet([Node1(3, 7)], kind="downset")
        f = SparseFunction(tree, {ROOT1: 1.0})
        sigma = br.rearrange_1d(F, f, 1 / 3)
        assert len(sigma) == 4

    def test_hand_case(self) -> None:
        shape = TreeShape(2, ndim=1)
        F, f = NodeSet([Node1(2, 0)]), SparseFunction(shape, {ROOT1: 1.0})
        sigma = br.rearrange_1d(F, f, 1 / 3)
        assert math.isclose(sigma[Node1(2, 0)], 1.0)
        cert = br.certify_1d(F, f, sigma, 1 / 3)
        assert math.isclose(cert.margin, 2.0)
        assert math.isclose(cert.constant, 9.0)

    def test_bitree_is_rejected(self) -> None:
        with pytest.raises(ValueError, match="one-tree"):
            br.stopping_set(Measure(TreeShape(1), {}), 0.3)
