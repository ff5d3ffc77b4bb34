"""Test the kernel comparison and the Carleson test."""

import math

import pytest

import bicap.bridge as bb


class TestKernel:
    """Test `bicap.bridge.kernel_vs_tree_check`."""

    def test_origin(self) -> None:
        o = bb.BidiscAtom((0, 0), (0, 0), 1.0)
        cmp = bb.kernel_vs_tree_check(o, o, 4)
        assert cmp.kernel == 100.0
        assert cmp.tree == 9

    def test_torus_diagonal_is_infinite(self) -> None:
        z = bb.BidiscAtom((1.0, 0.0), (1.0, 0.0), 1.0)
        cmp = bb.kernel_vs_tree_check(z, z, 5)
        assert not cmp.is_finite

    def test_symmetric(self) -> None:
        z, w = bb.random_atoms(1, 2, boundary_fraction=0.0)
        a = bb.kernel_vs_tree_check(z, w, 6)
        b = bb.kernel_vs_tree_check(w, z, 6)
        assert math.isclose(a.kernel, b.kernel, rel_tol=1e-12)
        assert a.tree == b.tree

    @pytest.mark.parametrize("seed", range(4))
    def test_ratio_is_bounded(self, seed: int) -> None:
        # both sides grow like the product of hyperbolic distances
        z, w = bb.random_atoms(seed, 2, boundary_fraction=0.0)
        ratio = bb.kernel_vs_tree_check(z, w, 8).ratio
        assert 1e-3 < ratio < 1e3


class TestCarleson:
    """Test `bicap.bridge.carleson_test`."""

    def test_point_at_the_origin(self) -> None:
        rep = bb.carleson_test([bb.BidiscAtom((0, 0), (0, 0), 1.0)], 2)
        assert math.isclose(rep.norm_sq, 1.0, rel_tol=1e-8)
        assert rep.subcap_constant == 1.0
        assert rep.holds

    def test_uniform_grid(self) -> None:
        rep = bb.carleson_test(bb.uniform_boundary_grid(2), 2, ("single-box", "random-collections"))
        assert rep.holds
        assert len(rep.subcap) == 2
        assert rep.ratio >= 1 - 1e-4
        assert math.isclose(rep.total_mass, 1.0)

    def test_random_atoms(self) -> None:
        rep = bb.carleson_test(bb.random_atoms(2, 12), 3, seed=2)
        assert rep.holds
        assert rep.norm_sq >= rep.subcap_constant * (1 - 1e-4)
