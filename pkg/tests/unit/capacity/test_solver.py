"""Test :mod:`bicap.capacity` solvers against closed forms and each other."""

import math

import jax.random as jr
import pytest

import bicap.capacity as bc
from bicap.bitree import ROOT1, ROOT2, Node1, Node2, NodeSet, TreeShape
from bicap.potential import energy
from bicap.utils.exceptions import BicapWarning, NotCertifiedError


def _leaf_sample(shape: TreeShape, n: int, seed: int) -> list[Node2]:
    leaves = shape.leaves()
    idx = jr.choice(jr.key(seed), len(leaves), (n,), replace=False).tolist()
    return [leaves[i] for i in idx]


class TestClosedForms:
    """Capacities with a known value."""

    @pytest.mark.parametrize(("lx", "ly"), [(0, 0), (1, 2), (3, 3), (4, 0)])
    def test_singleton(self, lx: int, ly: int) -> None:
        shape = TreeShape(4)
        point = Node2(Node1(lx, 0), Node1(ly, 0))
        res = bc.capacity(shape, [point])
        assert res.certified
        assert math.isclose(res.cap, 1 / ((lx + 1) * (ly + 1)), rel_tol=1e-8)

    def test_four_corners(self) -> None:
        res = bc.capacity(TreeShape(1), NodeSet([ROOT2], kind="boundary"))
        assert math.isclose(res.cap, 4 / 9, rel_tol=1e-8)
        assert all(math.isclose(m, 1 / 9, rel_tol=1e-6) for m in res.equilibrium.atoms.values())

    def test_empty(self) -> None:
        res = bc.capacity(TreeShape(2), [])
        assert res.cap == 0.0
        assert res.equilibrium.is_zero
        assert res.certified

    def test_foreign_target(self) -> None:
        with pytest.raises(ValueError, match="not a vertex"):
            bc.CapacityProblem(TreeShape(1), [Node2(Node1(2, 0), Node1(0, 0))])

    def test_bad_tolerance(self) -> None:
        with pytest.raises(ValueError, match="tol"):
            bc.CapacityProblem(TreeShape(1), [ROOT2], tol=0.0)


class TestInvariants:
    """Properties every solve must satisfy."""

    @pytest.fixture(scope="class")
    def shape(self) -> TreeShape:
        return TreeShape(3)

    @pytest.fixture(scope="class")
    def problem(self, shape: TreeShape) -> bc.CapacityProblem:
        return bc.CapacityProblem(shape, _leaf_sample(shape, 8, seed=11))

    @pytest.fixture(scope="class")
    def result(self, problem: bc.CapacityProblem) -> bc.CapacityResult:
        return bc.capacity(problem)

    def test_kkt(self, problem: bc.CapacityProblem, result: bc.CapacityResult) -> None:
        assert result.certified
        assert bc.kkt_report(result, problem).holds(1e-6)

    def test_cap_is_mass_and_energy(self, result: bc.CapacityResult) -> None:
        assert math.isclose(result.cap, result.equilibrium.total(), rel_tol=1e-9)
        assert math.isclose(result.cap, energy(result.equilibrium), rel_tol=1e-6)

    def test_monotone(self, shape: TreeShape, problem: bc.CapacityProblem) -> None:
        smaller = bc.capacity(shape, problem.target.nodes[:4]).cap
        larger = bc.capacity(shape, problem.target.union(NodeSet([Node2(ROOT1, Node1(1, 1))]))).cap
        cap = bc.capacity(problem).cap
        assert smaller <= cap * (1 + 1e-7)
        assert cap <= larger * (1 + 1e-7)

    def test_target_reduces_to_maximal_elements(self, shape: TreeShape) -> None:
        a = Node2(Node1(1, 0), Node1(1, 1))
        below = Node2(Node1(3, 1), Node1(2, 3))
        assert math.isclose(
            bc.capacity(shape, [a, below]).cap, bc.capacity(shape, [a]).cap, rel_tol=1e-9
        )

    @pytest.mark.parametrize("kernel", ["gram", "tree"])
    def test_kernels_agree(self, problem: bc.CapacityProblem, result: bc.CapacityResult, kernel: str) -> None:
        other = bc.capacity(problem, solver={"kernel": kernel})
        assert math.isclose(other.cap, result.cap, rel_tol=1e-7)

    def test_primal(self, result: bc.CapacityResult) -> None:
        assert math.isclose(result.primal.norm_sq(), result.cap, rel_tol=1e-6)

    def test_not_certified(self, problem: bc.CapacityProblem) -> None:
        solver = bc.DualCapacitySolver(tol=1e-14, max_iters=1, polish=False)
        with pytest.raises(NotCertifiedError, match="gap"):
            bc.capacity(problem, solver=solver, require_certified=True)
        assert not bc.capacity(problem, solver=solver).certified


class TestExact:
    """Test `bicap.capacity.capacity_tree_exact`."""

    def test_two_leaves(self) -> None:
        out = bc.capacity_tree_exact(TreeShape(1, ndim=1), [Node1(1, 0), Node1(1, 1)])
        assert math.isclose(out.cap, 2 / 3)

    @pytest.mark.parametrize("depth", [1, 3, 6])
    def test_single_leaf(self, depth: int) -> None:
        out = bc.capacity_tree_exact(TreeShape(depth, ndim=1), [Node1(depth, 1)])
        assert math.isclose(out.cap, 1 / (depth + 1))

    def test_agrees_with_the_dual_solver(self) -> None:
        shape = TreeShape(5, ndim=1)
        target = [Node1(5, 0), Node1(5, 3), Node1(3, 6), Node1(4, 2)]
        exact = bc.capacity_tree_exact(shape, target)
        dual = bc.capacity(shape, target, tol=1e-12)
        assert math.isclose(exact.cap, dual.cap, rel_tol=1e-7)

    def test_equilibrium_potential_is_one(self) -> None:
        from bicap.potential import potential

        shape = TreeShape(4, ndim=1)
        target = [Node1(4, 1), Node1(2, 3)]
        out = bc.capacity_tree_exact(shape, target)
        for node in target:
            assert math.isclose(potential(out.equilibrium, node), 1.0, rel_tol=1e-12)

    def test_needs_a_tree(self) -> None:
        with pytest.raises(ValueError, match="one-tree"):
            bc.capacity_tree_exact(TreeShape(1), [ROOT2])


class TestAtomic:
    """Test `bicap.capacity.capacity_atomic`."""

    def test_staircase_three_points(self) -> None:
        pts = [
            Node2(Node1(3, 0), Node1(0, 0)),
            Node2(Node1(1, 0), Node1(1, 0)),
            Node2(Node1(0, 0), Node1(3, 0)),
        ]
        assert math.isclose(bc.capacity_atomic(pts).cap, 5 / 12, rel_tol=1e-12)

    def test_repeated_points_warn(self) -> None:
        a = Node2(Node1(1, 0), Node1(1, 0))
        with pytest.warns(BicapWarning, match="repeated"):
            res = bc.capacity_atomic([a, a])
        assert math.isclose(res.cap, 0.25)

    def test_agrees_with_the_dual_solver(self) -> None:
        shape = TreeShape(3)
        pts = _leaf_sample(shape, 6, seed=4)
        atomic = bc.capacity_atomic(pts, shape=shape)
        dual = bc.capacity(shape, pts, tol=1e-12)
        assert math.isclose(atomic.cap, dual.cap, rel_tol=1e-7)

    def test_deep_points(self) -> None:
        depth = 10**6
        pts = [Node2(Node1(depth, 0), Node1(depth, 0)), Node2(Node1(depth, 1), Node1(depth, 1))]
        res = bc.capacity_atomic(pts)
        assert res.certified
        # by symmetry both atoms carry cap / 2 and V = 1 on each
        d_self = (depth + 1) ** 2
        d_meet = depth**2
        assert math.isclose(res.cap, 2 / (d_self + d_meet), rel_tol=1e-9)

    def test_gram_matrix(self) -> None:
        o, a = Node1(0, 0), Node1(1, 0)
        prob = bc.AtomicProblem.from_([Node2(a, a), Node2(o, o)])
        assert prob.exact_gram == [[4, 1], [1, 1]]
