"""Test the ``bicap`` argument parser."""

import pytest

from bicap.cli import build_parser


@pytest.fixture(scope="module")
def parser():
    return build_parser()


def test_cap(parser) -> None:
    ns = parser.parse_args(["cap", "set.json", "--depth", "3"])
    assert (ns.command, ns.input, ns.depth) == ("cap", "set.json", 3)


def test_suite_options(parser) -> None:
    ns = parser.parse_args(["suite", "rearrange", "--lambda", "16", "--max-iters", "50"])
    assert ns.suite == "rearrange"
    assert ns.lam == 16.0
    assert ns.max_iters == 50
    assert ns.replay is None


def test_suite_replay_without_name(parser) -> None:
    ns = parser.parse_args(["suite", "--replay", "r.json"])
    assert ns.suite is None
    assert ns.replay == "r.json"


def test_unknown_suite_exits(parser) -> None:
    with pytest.raises(SystemExit):
        parser.parse_args(["suite", "bogus"])


def test_merge_takes_paths(parser) -> None:
    ns = parser.parse_args(["merge", "a.csv", "b.csv", "--out", "m.csv"])
    assert ns.paths == ["a.csv", "b.csv"]


def test_counterexample_report(parser) -> None:
    ns = parser.parse_args(["counterexample", "--base", "20", "--steps", "40", "--report", "s.csv"])
    assert (ns.base, ns.steps, ns.report) == (20, 40, "s.csv")
