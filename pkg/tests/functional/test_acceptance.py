"""Acceptance batteries: seeded suites and exact anchors at realistic sizes."""

import itertools
import math

import pytest

from bicap.bitree import TreeShape
from bicap.bridge import kernel_vs_tree_check, random_atoms
from bicap.capacity import capacity
from bicap.cli import RunConfig, SuiteResult, run_suite
from bicap.cli._src.instances import instance_key, random_node2
from bicap.counterexamples import StaircaseConfig, build_staircase

pytestmark = [
    pytest.mark.slow,
    pytest.mark.filterwarnings("ignore::bicap.utils.exceptions.BicapWarning"),
]


def _suite(name: str, **fields) -> RunConfig:
    return RunConfig(command="suite", suite=name, **fields)


@pytest.mark.parametrize("index", range(50))
def test_singleton_capacity(index: int) -> None:
    depth = 1 + index % 10
    alpha = random_node2(instance_key(2024, index), depth)
    res = capacity(TreeShape(depth), [alpha])
    expected = 1 / ((alpha.x.level + 1) * (alpha.y.level + 1))
    assert math.isclose(res.cap, expected, rel_tol=1e-8)


class TestStaircase:
    @pytest.fixture(scope="class")
    def report(self):
        return build_staircase(StaircaseConfig(20, 40))

    def test_potential_overshoots(self, report) -> None:
        assert report.omega_potential >= 9 * 40 / 50
        assert report.max_support_potential <= 1 + 1e-9

    def test_masses_are_balanced(self, report) -> None:
        assert report.sup_inf_ratio <= 5
        assert report.offdiag_row_bound <= 1 / 9


@pytest.mark.parametrize(
    "config",
    [
        _suite("oracles", depth=6, seed=7, count=100),
        _suite("maxprinciple", depth=4, count=20),
        _suite("carleson", depth=4, count=10, strategies="single-box,levelset-guided"),
    ],
    ids=lambda c: c.suite,
)
def test_suite_has_no_violations(config: RunConfig) -> None:
    result = run_suite(config)
    assert result.ok, result.violations[:3]
    assert result.summary["rows"] > 0


def _growth(values: list[float]) -> list[float]:
    return [b / a for a, b in itertools.pairwise(values)]


class TestSciAcrossDepths:
    """200 seeded functions per depth; every instance also runs a trace check."""

    @pytest.fixture(scope="class")
    def results(self) -> dict[int, SuiteResult]:
        return {
            depth: run_suite(_suite("sci", depth=depth, seed=11, count=200))
            for depth in range(4, 8)
        }

    def test_no_violations(self, results: dict[int, SuiteResult]) -> None:
        for result in results.values():
            assert result.ok, result.violations[:3]
            assert result.summary["instances"] == 200

    def test_max_ratio_grows_slowly(self, results: dict[int, SuiteResult]) -> None:
        ratios = [results[depth].summary["max_ratio"] for depth in sorted(results)]
        assert all(r is not None and math.isfinite(r) and r > 0 for r in ratios)
        assert all(g < 1.1 for g in _growth(ratios)), ratios


class TestRearrangeAcrossDepths:
    """50 random boundary measures per depth at ``delta = 1``."""

    @pytest.fixture(scope="class")
    def results(self) -> dict[int, SuiteResult]:
        return {
            depth: run_suite(_suite("rearrange", depth=depth, delta=1.0, count=50))
            for depth in range(4, 7)
        }

    def test_no_violations(self, results: dict[int, SuiteResult]) -> None:
        for result in results.values():
            assert result.ok, result.violations[:3]

    def test_constant_is_stable(self, results: dict[int, SuiteResult]) -> None:
        c5 = results[5].summary["max_constant"]
        c6 = results[6].summary["max_constant"]
        assert c5 is not None
        assert c6 is not None
        assert math.isclose(c6, c5, rel_tol=0.2), (c5, c6)

    def test_decay_constant_is_stable(self, results: dict[int, SuiteResult]) -> None:
        constants = [results[depth].summary["decay_constant"] for depth in sorted(results)]
        assert all(c is not None and c > 0 for c in constants)
        assert max(constants) <= 1.2 * min(constants), constants


class TestBridge:
    @pytest.fixture(scope="class")
    def carleson(self) -> SuiteResult:
        return run_suite(
            _suite("carleson", depth=6, count=2, strategies="single-box,levelset-guided")
        )

    def test_grid_ratio_is_stable(self, carleson: SuiteResult) -> None:
        assert carleson.ok, carleson.violations[:3]
        grid = {r["depth"]: r["ratio"] for r in carleson.rows if r["family"] == "grid"}
        assert sorted(grid) == [3, 4, 5, 6]
        ratios = [grid[depth] for depth in sorted(grid)]
        assert all(math.isfinite(r) and r >= 1 - 1e-4 for r in ratios)
        assert max(ratios) <= 1.2 * min(ratios), ratios

    def test_kernel_window(self) -> None:
        window = 1e3
        atoms = random_atoms(12, 2000)
        ratios = [
            cmp.ratio
            for z, w in zip(atoms[::2], atoms[1::2], strict=True)
            if (cmp := kernel_vs_tree_check(z, w, 6)).is_finite
        ]
        assert len(ratios) == 1000
        assert 1 / window <= min(ratios)
        assert max(ratios) <= window
