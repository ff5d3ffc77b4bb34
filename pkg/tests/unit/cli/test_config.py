"""Test :class:`bicap.cli.RunConfig`."""

import argparse

import pytest

from bicap.cli import RunConfig


class TestRunConfig:
    @pytest.fixture(scope="class")
    def config(self) -> RunConfig:
        return RunConfig(command="suite", suite="sci")

    def test_defaults(self, config: RunConfig) -> None:
        assert config.depth == 4
        assert config.count == 20
        assert config.strategies == ("single-box",)
        assert config.solver_options() == {"tol": 1e-8, "max_iters": 20_000}

    def test_strategies_from_a_comma_string(self) -> None:
        cfg = RunConfig(command="suite", strategies="single-box, levelset-guided,")
        assert cfg.strategies == ("single-box", "levelset-guided")

    @pytest.mark.parametrize(
        ("changes", "match"),
        [
            ({"suite": "bogus"}, "unknown suite"),
            ({"depth": 0}, "depth"),
            ({"tol": 0.0}, "tol"),
            ({"count": -1}, "count"),
        ],
    )
    def test_validation(self, changes: dict, match: str) -> None:
        with pytest.raises(ValueError, match=match):
            RunConfig(command="suite", **changes)

    def test_replace(self, config: RunConfig) -> None:
        other = config.replace(seed=5, out="x.csv")
        assert (other.seed, other.out, other.suite) == (5, "x.csv", "sci")
        assert config.seed == 0

    def test_from_mapping(self) -> None:
        record = {"command": "suite", "suite": "oracles", "depth": 2, "tol": None, "extra": 1}
        cfg = RunConfig.from_(record)
        assert cfg.suite == "oracles"
        assert cfg.depth == 2
        assert cfg.tol == 1e-8

    def test_from_namespace(self) -> None:
        ns = argparse.Namespace(command="cap", input="set.json", depth=3, verbose=2)
        cfg = RunConfig.from_(ns)
        assert (cfg.command, cfg.input, cfg.depth) == ("cap", "set.json", 3)
