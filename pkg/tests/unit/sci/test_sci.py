"""Test level sets and the strong capacitary inequality."""

import math

import jax.random as jr
import pytest

import bicap.sci as bs
from bicap.bitree import ROOT2, Node1, Node2, NodeSet, TreeShape
from bicap.potential import SparseFunction


@pytest.fixture(scope="module")
def f() -> SparseFunction:
    shape = TreeShape(3)
    nodes = shape.nodes()
    idx = jr.choice(jr.key(7), len(nodes), (5,), replace=False).tolist()
    vals = jr.uniform(jr.key(8), (5,), minval=0.2, maxval=3.0).tolist()
    return SparseFunction(shape, {nodes[i]: v for i, v in zip(idx, vals, strict=True)})


class TestDyadicRange:
    @pytest.mark.parametrize(
        ("low", "high", "expected"),
        [(1.0, 1.0, (0, 0)), (0.3, 5.0, (-2, 3)), (0.5, 4.0, (-1, 2)), (3.0, 3.0, (1, 2))],
    )
    def test_bracket(self, low: float, high: float, expected: tuple[int, int]) -> None:
        assert bs.dyadic_range(low, high) == expected


class TestLevelSets:
    """Test `bicap.sci.level_sets`."""

    def test_empty(self) -> None:
        fam = bs.level_sets(SparseFunction(TreeShape(2), {}))
        assert fam.is_empty
        assert fam.certified

    def test_caps_decrease(self, f: SparseFunction) -> None:
        fam = bs.level_sets(f)
        assert fam.certified
        caps = [lv.cap for lv in fam]
        assert all(a >= b * (1 - 1e-7) for a, b in zip(caps, caps[1:], strict=False))
        assert list(fam.ks) == sorted(fam.ks)

    def test_generators_form_an_antichain(self, f: SparseFunction) -> None:
        for lv in bs.level_sets(f):
            assert lv.generators.generators().nodes == lv.generators.nodes
            assert lv.boundary.kind == "boundary"

    def test_strict_levels_are_smaller(self, f: SparseFunction) -> None:
        weak = {lv.k: lv.cap for lv in bs.level_sets(f)}
        strict = {lv.k: lv.cap for lv in bs.level_sets(f, strict=True)}
        for k in weak.keys() & strict.keys():
            assert strict[k] <= weak[k] * (1 + 1e-7)


class TestSciRatio:
    """Test `bicap.sci.sci_ratio`."""

    def test_root_indicator(self) -> None:
        rep = bs.sci_ratio(SparseFunction(TreeShape(1), {ROOT2: 1.0}))
        assert math.isclose(rep.ratio, 16 / 27, rel_tol=1e-8)
        assert len(rep.rows) == 1

    def test_rows_accumulate(self, f: SparseFunction) -> None:
        rep = bs.sci_ratio(f)
        assert math.isclose(rep.rows[-1].cumulative, rep.total)
        assert math.isclose(rep.norm_sq, f.norm_sq())
        assert math.isclose(rep.rows[0].term, 4 / 3 * 4.0 ** rep.rows[0].k * rep.rows[0].cap)

    def test_scale_invariant(self, f: SparseFunction) -> None:
        # doubling f shifts every level by one and keeps the ratio
        a = bs.sci_ratio(f).ratio
        b = bs.sci_ratio(f.scale(2.0)).ratio
        assert math.isclose(a, b, rel_tol=1e-6)

    def test_zero_function(self) -> None:
        with pytest.raises(ValueError, match="non-zero"):
            bs.sci_ratio(SparseFunction(TreeShape(1), {}))


class TestMixedEnergies:
    """Mixed energies and the diagonal domination of the level double sum."""

    def test_same_set(self) -> None:
        corners = NodeSet([ROOT2], kind="boundary")
        rep = bs.mixed_energy_check(TreeShape(1), corners, corners)
        assert math.isclose(rep.ratio, 1.0, rel_tol=1e-6)
        assert not rep.swapped

    def test_nested_sets(self) -> None:
        shape = TreeShape(2)
        e = NodeSet([ROOT2], kind="boundary")
        f = NodeSet([Node2(Node1(1, 0), Node1(1, 1))], kind="boundary")
        rep = bs.mixed_energy_check(shape, e, f)
        # V^{mu_E} = 1 on F, so the mutual energy is cap F
        assert math.isclose(rep.lhs, rep.cap_f, rel_tol=1e-5)
        assert rep.ratio <= 1.0 + 1e-7

    def test_swaps_with_a_warning(self) -> None:
        from bicap.utils.exceptions import BicapWarning

        shape = TreeShape(2)
        small = NodeSet([Node2(Node1(1, 0), Node1(1, 1))], kind="boundary")
        big = NodeSet([ROOT2], kind="boundary")
        with pytest.warns(BicapWarning, match="swapping"):
            rep = bs.mixed_energy_check(shape, small, big)
        assert rep.swapped
        assert rep.cap_f <= rep.cap_e

    def test_rejects_interior_sets(self) -> None:
        with pytest.raises(ValueError, match="boundary"):
            bs.mixed_energy_check(TreeShape(1), NodeSet([ROOT2]), NodeSet([ROOT2]))

    def test_diagonal_hand_case(self) -> None:
        o, a = Node1(0, 0), Node1(1, 0)
        outer, inner = NodeSet([Node2(o, a)]), NodeSet([Node2(a, a)])
        rep = bs.diagonal_domination_check(TreeShape(1), [outer, inner], [0, 1])
        assert math.isclose(rep.offdiag, 2.0, rel_tol=1e-8)
        assert math.isclose(rep.diag, 1.5, rel_tol=1e-8)

    def test_diagonal_needs_nested_sets(self) -> None:
        o, a, b = Node1(0, 0), Node1(1, 0), Node1(1, 1)
        with pytest.raises(ValueError, match="nested"):
            bs.diagonal_domination_check(
                TreeShape(1), [NodeSet([Node2(o, a)]), NodeSet([Node2(b, b)])], [0, 1]
            )
        with pytest.raises(ValueError, match="levels"):
            bs.diagonal_domination_check(TreeShape(1), [NodeSet([Node2(o, a)])], [0, 1])

    def test_diagonal_from_family(self, f: SparseFunction) -> None:
        rep = bs.diagonal_domination_check(bs.level_sets(f))
        assert rep.diag > 0
        assert rep.offdiag >= rep.diag * (1 - 1e-7)
