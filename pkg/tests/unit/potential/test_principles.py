"""Test the one-tree principles and the trace-norm estimate."""

import math

import pytest

import bicap.potential as bp
from bicap.bitree import ROOT1, ROOT2, Node1, Node2, TreeShape
from bicap.utils.exceptions import BicapWarning, HypothesisError


@pytest.fixture(scope="module")
def tree() -> TreeShape:
    return TreeShape(3, ndim=1)


class TestSuperharmonic:
    def test_halving_is_superharmonic(self, tree: TreeShape) -> None:
        f = bp.SparseFunction(tree, {n: 2.0**-n.level for n in tree.nodes1()})
        assert bp.superharmonic_check(f)

    def test_growth_is_not(self, tree: TreeShape) -> None:
        f = bp.SparseFunction(tree, {ROOT1: 1.0, Node1(1, 0): 0.75, Node1(1, 1): 0.5})
        assert not bp.superharmonic_check(f)

    def test_bitree_is_rejected(self) -> None:
        f = bp.SparseFunction(TreeShape(1), {ROOT2: 1.0})
        with pytest.raises(ValueError, match="one-tree"):
            bp.superharmonic_check(f)


class TestMaxPrinciple:
    def test_gap_is_never_positive(self, tree: TreeShape) -> None:
        leaves = tree.leaves1()
        rho = bp.Measure(tree, {leaves[0]: 1.0, leaves[5]: 0.3, Node1(1, 1): 0.2})
        assert bp.max_principle_gap(rho) <= 1e-12

    def test_zero_measure(self, tree: TreeShape) -> None:
        assert bp.max_principle_gap(bp.Measure(tree, {})) == 0.0


class TestDomination:
    def test_dominating_function(self, tree: TreeShape) -> None:
        nu = bp.Measure(tree, {Node1(3, 1): 0.1, Node1(3, 6): 0.1})
        f = bp.SparseFunction(tree, {ROOT1: 1.0})
        assert bp.domination_holds(f, nu)

    def test_hypothesis_on_support(self, tree: TreeShape) -> None:
        nu = bp.Measure(tree, {Node1(3, 1): 1.0})
        f = bp.SparseFunction(tree, {ROOT1: 1.0})
        with pytest.raises(HypothesisError, match="supp"):
            bp.domination_holds(f, nu)

    def test_requires_superharmonic(self, tree: TreeShape) -> None:
        nu = bp.Measure(tree, {Node1(3, 1): 0.1})
        f = bp.SparseFunction(tree, {Node1(2, 0): 1.0})
        with pytest.raises(HypothesisError, match="superharmonic"):
            bp.domination_holds(f, nu)


class TestTraceNorm:
    """Test `bicap.potential.trace_norm_estimate`."""

    def test_point_mass(self) -> None:
        a = Node1(1, 0)
        out = bp.trace_norm_estimate(bp.Measure(TreeShape(1), {Node2(a, a): 1.0}))
        assert out.converged
        assert math.isclose(out.norm_sq, 4.0, rel_tol=1e-8)
        assert 0.0 <= out.residual < 1e-6

    def test_dominates_the_test_function_ratio(self) -> None:
        shape = TreeShape(2)
        leaves = shape.leaves()
        nu = bp.Measure(shape, {leaves[0]: 0.5, leaves[7]: 0.25, leaves[13]: 0.25})
        out = bp.trace_norm_estimate(nu)
        # phi = indicator of the root gives |I phi|^2_nu / |phi|^2 = nu total
        assert out.norm_sq >= nu.total() - 1e-9

    def test_zero_measure(self) -> None:
        with pytest.raises(ValueError, match="non-zero"):
            bp.trace_norm_estimate(bp.Measure(TreeShape(1), {}))

    def test_warns_when_not_converged(self) -> None:
        shape = TreeShape(2)
        leaves = shape.leaves()
        nu = bp.Measure(shape, {leaves[0]: 1.0, leaves[15]: 1.0})
        with pytest.warns(BicapWarning, match="without"):
            out = bp.trace_norm_estimate(nu, tol=1e-300, max_iters=2)
        assert not out.converged
