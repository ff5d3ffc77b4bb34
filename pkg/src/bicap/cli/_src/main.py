"""``bicap`` command-line entry point.

Exit codes: 0 success, 2 bad input, 3 numerics that did not certify (output
is still written), 4 a hard invariant failed (a replay file is written).
"""

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_INPUT", "EXIT_UNCERTIFIED", "EXIT_VIOLATION"]

import argparse
import csv
import json
import logging
import sys
import warnings
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any, Final, TextIO

from .config import SUITE_NAMES, RunConfig
from .suites import run_suite
from bicap.bitree import NodeSet, TreeShape
from bicap.capacity import capacity
from bicap.counterexamples import StaircaseConfig, build_staircase
from bicap.io import dump_json, dumps, from_json, load_json, to_json
from bicap.utils.exceptions import (
    BicapWarning,
    InvariantViolationError,
    NotCertifiedError,
)

logger = logging.getLogger("bicap.cli")

EXIT_OK: Final = 0
EXIT_INPUT: Final = 2
EXIT_UNCERTIFIED: Final = 3
EXIT_VIOLATION: Final = 4

_PROVENANCE: Final = ("source", "source_row")


# ===================================================================
# Parser


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=4, help="truncation depth L")
    common.add_argument("--tol", type=float, default=1e-8, help="solver duality-gap tolerance")
    common.add_argument("--max-iters", type=int, default=20_000, dest="max_iters")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--base", type=int, default=2, help="staircase base b")
    common.add_argument("--steps", type=int, default=2, help="staircase length n")
    common.add_argument("--lambda", type=float, default=9.0, dest="lam")
    common.add_argument("--delta", type=float, default=1.0)
    common.add_argument("--count", type=int, default=20, help="random instances per suite")
    common.add_argument(
        "--strategies",
        default="single-box",
        help="comma-separated subcapacity strategies",
    )
    common.add_argument("--out", help="output path; '.csv' writes rows, anything else JSON")
    common.add_argument("-v", "--verbose", action="count", default=0)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="bicap", description="Capacities and potentials on dyadic bitrees."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("cap", parents=[common], help="capacity of a set read from JSON")
    cap.add_argument("input", metavar="SETFILE")

    suite = sub.add_parser("suite", parents=[common], help="run a seeded experiment suite")
    suite.add_argument("suite", nargs="?", choices=SUITE_NAMES, metavar="NAME")
    suite.add_argument("--replay", help="re-run the configuration stored in a replay file")

    merge = sub.add_parser("merge", parents=[common], help="concatenate CSV reports")
    merge.add_argument("paths", nargs="+", metavar="PATH")

    counter = sub.add_parser(
        "counterexample", parents=[common], help="the staircase maximum-principle failure"
    )
    counter.add_argument("--report", dest="report", help="alias of --out")
    return parser


# ===================================================================
# Output


def _fieldnames(rows: Iterable[dict[str, Any]]) -> list[str]:
    seen: dict[str, None] = {}
    for row in rows:
        seen.update(dict.fromkeys(row))
    return list(seen)


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, str | int | float):
        return value
    return json.dumps(to_json(value), separators=(",", ":"))


def _write_csv(rows: Sequence[dict[str, Any]], stream: TextIO, fields: list[str] | None = None) -> None:
    fields = fields or _fieldnames(rows)
    writer = csv.DictWriter(stream, fieldnames=fields, restval="", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _cell(v) for k, v in row.items()})


def _emit(payload: dict[str, Any], rows: Sequence[dict[str, Any]], out: str | None) -> None:
    if out is None:
        sys.stdout.write(dumps(payload))
    elif out.endswith(".csv"):
        with Path(out).open("w", encoding="utf-8", newline="") as f:
            _write_csv(rows, f)
    else:
        dump_json(payload, out)
    if out is not None:
        logger.info("wrote %s", out)


def _replay_path(config: RunConfig) -> Path:
    if config.out is not None:
        return Path(f"{config.out}.replay.json")
    return Path(f"bicap-{config.suite}.replay.json")


# ===================================================================
# Commands


def cmd_cap(config: RunConfig, /) -> int:
    """Solve for the capacity of the set in ``config.input``."""
    record = load_json(config.input)  # type: ignore[arg-type]
    target = from_json(NodeSet, record)
    ndim = int(record.get("ndim", target.ndim or 2))
    shape = TreeShape(int(record.get("depth", config.depth)), ndim=ndim)
    result = capacity(shape, target, **config.solver_options())
    payload = {
        "config": config,
        "shape": shape,
        "target": target,
        "cap": result.cap,
        "gap": result.gap,
        "iterations": result.iterations,
        "certified": result.certified,
        "equilibrium": result.equilibrium,
    }
    row = {k: payload[k] for k in ("cap", "gap", "iterations", "certified")}
    _emit(payload, [row], config.out)
    if not result.certified:
        msg = f"capacity not certified: gap {result.gap:.3e} after {result.iterations} iterations"
        raise NotCertifiedError(msg)
    return EXIT_OK


def cmd_suite(config: RunConfig, /) -> int:
    """Run a suite; violations are written to a replay file."""
    if config.replay is not None:
        stored = load_json(config.replay)
        config = RunConfig.from_(stored["config"]).replace(out=config.out, replay=None)
        logger.info("replaying %s with seed %d", config.suite, config.seed)
    if config.suite is None:
        msg = "suite needs a NAME or --replay"
        raise ValueError(msg)

    with warnings.catch_warnings():
        warnings.simplefilter("always", BicapWarning)
        result = run_suite(config)

    payload = {
        "config": config,
        "suite": result.name,
        "summary": result.summary,
        "uncertified": result.uncertified,
        "violations": list(result.violations),
        "rows": list(result.rows),
    }
    _emit(payload, result.rows, config.out)
    try:
        result.raise_for_violations()
    except InvariantViolationError as err:
        path = dump_json(
            {"config": config, "violation": err.instance, "violations": list(result.violations)},
            _replay_path(config),
        )
        logger.error("%s; replay with: bicap suite --replay %s", err, path)  # noqa: TRY400
        return EXIT_VIOLATION
    if result.uncertified:
        logger.warning("%d solves did not certify", result.uncertified)
        return EXIT_UNCERTIFIED
    return EXIT_OK


def cmd_merge(paths: Sequence[str], out: str | None, /) -> int:
    """Concatenate CSV reports with identical headers, tagging each row's origin."""
    header: list[str] | None = None
    merged: list[dict[str, Any]] = []
    for path in paths:
        with Path(path).open(encoding="utf-8", newline="") as f:
            reader = csv.DictReader(f)
            fields = list(reader.fieldnames or [])
            if header is None:
                header = fields
            elif fields != header:
                msg = f"{path}: columns {fields} do not match {header}"
                raise ValueError(msg)
            merged.extend(
                {"source": path, "source_row": i, **row} for i, row in enumerate(reader)
            )
    fields = [*_PROVENANCE, *(header or [])]
    if out is None:
        _write_csv(merged, sys.stdout, fields)
    else:
        with Path(out).open("w", encoding="utf-8", newline="") as f:
            _write_csv(merged, f, fields)
    logger.info("merged %d rows from %d files", len(merged), len(paths))
    return EXIT_OK


def cmd_counterexample(config: RunConfig, /) -> int:
    """Build the staircase and report its equilibrium."""
    report = build_staircase(StaircaseConfig(config.base, config.steps))
    rows = [
        {
            "i": i,
            "level_x": p.x.level,
            "level_y": p.y.level,
            "mass": report.equilibrium[p],
            "potential": v,
        }
        for i, (p, v) in enumerate(zip(report.points, report.support_potentials, strict=True))
    ]
    payload = {
        "config": config,
        "staircase": report,
        "max_support_potential": report.max_support_potential,
    }
    _emit(payload, rows, config.out)
    if not report.certified:
        msg = "staircase equilibrium did not certify"
        raise NotCertifiedError(msg)
    return EXIT_OK


# ===================================================================


def _configure_logging(verbosity: int) -> None:
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    logging.captureWarnings(True)  # noqa: FBT003


def main(argv: Sequence[str] | None = None) -> int:
    """Run the command line; returns the exit code."""
    ns = build_parser().parse_args(argv)
    _configure_logging(ns.verbose)
    if ns.command == "counterexample" and ns.report is not None:
        ns.out = ns.report
    try:
        if ns.command == "merge":
            return cmd_merge(ns.paths, ns.out)
        config = RunConfig.from_(ns)
        if ns.command == "cap":
            return cmd_cap(config)
        if ns.command == "suite":
            return cmd_suite(config)
        return cmd_counterexample(config)
    except NotCertifiedError as err:
        logger.error("%s", err)  # noqa: TRY400
        return EXIT_UNCERTIFIED
    except (ValueError, KeyError, TypeError, OSError) as err:
        logger.error("input error: %s", err)  # noqa: TRY400
        return EXIT_INPUT

