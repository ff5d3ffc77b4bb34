"""Seeded experiment suites.

A suite maps ``RunConfig.count`` instances (and a few fixed anchors) to flat
report rows. Hard invariants that fail are collected as violations; numerics
that did not certify are counted separately.
"""

__all__ = [
    "SuiteResult",
    "SUITES",
    "run_suite",
    "run_sci",
    "run_rearrange",
    "run_maxprinciple",
    "run_carleson",
    "run_oracles",
]

import logging
import math
from collections.abc import Callable, Iterable
from typing import Any, Final

import equinox as eqx
import jax.random as jr

from .config import RunConfig
from .instances import (
    instance_key,
    random_boundary_measure,
    random_box_union,
    random_function,
    random_leaf_set,
    random_measure,
    random_node1,
    random_node2,
    random_superharmonic,
)
from bicap.bitree import ROOT2, Node1, Node2, NodeSet, TreeShape
from bicap.bridge import carleson_test, kernel_vs_tree_check, random_atoms, uniform_boundary_grid
from bicap.capacity import (
    CapacityProblem,
    capacity,
    capacity_atomic,
    capacity_tree_exact,
    disintegrate_to_boundary,
    kkt_report,
)
from bicap.counterexamples import StaircaseConfig, build_staircase, staircase_points
from bicap.potential import (
    Measure,
    SparseFunction,
    dense_ok,
    domination_holds,
    hardy,
    max_principle_gap,
    potential,
)
from bicap.rearrangement import energy_decay, quantitative_max_principle, rearrange_2d
from bicap.sci import sci_ratio, trace_upper_bound_check
from bicap.utils import parallel_map
from bicap.utils.exceptions import BicapError, HypothesisError, InvariantViolationError

logger = logging.getLogger(__name__)

Row = dict[str, Any]

# Sparse depth of the atomic-oracle point sets.
_SPARSE_DEPTH: Final = 10**6
_DECAY_DELTAS: Final = (1 / 64, 1 / 16, 1 / 4, 1.0)
_MAXPRINCIPLE_LAMBDAS: Final = (1.5, 2.0, 4.0)


class SuiteResult(eqx.Module):
    """Rows, violations and summary numbers of one suite run."""

    name: str = eqx.field(static=True)
    rows: tuple[Row, ...] = eqx.field(static=True)
    violations: tuple[Row, ...] = eqx.field(static=True)
    uncertified: int = eqx.field(static=True)
    summary: Row = eqx.field(static=True)

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_for_violations(self) -> None:
        """Raise `InvariantViolationError` carrying the first violation."""
        if self.violations:
            first = self.violations[0]
            msg = f"{self.name}: {len(self.violations)} violations, first {first['check']!r}"
            raise InvariantViolationError(msg, first)


class _Acc:
    """Per-instance accumulator; merged in instance order."""

    def __init__(self, instance: int | str) -> None:
        self.instance = instance
        self.rows: list[Row] = []
        self.violations: list[Row] = []
        self.uncertified = 0

    def row(self, **fields: Any) -> None:
        self.rows.append({"instance": self.instance, **fields})

    def check(self, ok: bool, check: str, **detail: Any) -> None:  # noqa: FBT001
        if not ok:
            logger.warning("instance %s violates %s: %s", self.instance, check, detail)
            self.violations.append({"check": check, "instance": self.instance, **detail})

    def certified(self, flag: bool) -> None:  # noqa: FBT001
        self.uncertified += not flag


def _collect(
    name: str,
    accs: Iterable[_Acc],
    summary: Callable[[list[Row]], Row],
) -> SuiteResult:
    rows: list[Row] = []
    violations: list[Row] = []
    uncertified = 0
    for acc in accs:
        rows.extend(acc.rows)
        violations.extend(acc.violations)
        uncertified += acc.uncertified
    result = SuiteResult(
        name=name,
        rows=tuple(rows),
        violations=tuple(violations),
        uncertified=uncertified,
        summary={"rows": len(rows), "violations": len(violations), **summary(rows)},
    )
    logger.info(
        "suite %s: %d rows, %d violations, %d uncertified",
        name,
        len(rows),
        len(violations),
        uncertified,
    )
    return result


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _column_max(rows: list[Row], key: str, **where: Any) -> float | None:
    values = [
        r[key]
        for r in rows
        if r.get(key) is not None
        and math.isfinite(r[key])
        and all(r.get(k) == v for k, v in where.items())
    ]
    return max(values, default=None)


def _run(config: RunConfig, instance: Callable[[RunConfig, int], _Acc]) -> list[_Acc]:
    return parallel_map(lambda i: instance(config, i), range(config.count))


# ===================================================================
# sci


def _sci_instance(config: RunConfig, i: int) -> _Acc:
    acc = _Acc(i)
    depth = config.depth
    k_f, k_nu, k_boxes = jr.split(instance_key(config.seed, i), 3)
    opts = config.solver_options()

    f = random_function(k_f, TreeShape(depth))
    rep = sci_ratio(f, solver=opts)
    acc.certified(rep.certified)
    for level in rep.rows:
        acc.row(
            L=depth,
            k=level.k,
            cap_Ek=level.cap,
            term=level.term,
            cumulative=level.cumulative,
            norm_sq_f=rep.norm_sq,
            ratio=rep.ratio,
        )
    acc.check(math.isfinite(rep.ratio) and rep.ratio >= 0, "sci-finite", ratio=rep.ratio)

    # trace checks report violations only
    nu = random_boundary_measure(k_nu, depth, count=6)
    boxes = random_box_union(k_boxes, depth)
    trace = trace_upper_bound_check(nu, boxes, solver=opts)
    logger.debug("instance %s trace: mass=%.6g cap=%.6g", i, trace.mass, trace.cap)
    acc.check(trace.holds, "trace-easy-direction", mass=trace.mass, cap=trace.cap)
    return acc


def run_sci(config: RunConfig, /) -> SuiteResult:
    """Per-level strong capacitary terms of random functions.

    Each instance also checks the easy trace direction on a random measure;
    those checks only show up as violations.
    """

    def summary(rows: list[Row]) -> Row:
        return {
            "instances": len({r["instance"] for r in rows}),
            "max_ratio": _column_max(rows, "ratio"),
        }

    return _collect("sci", _run(config, _sci_instance), summary)


# ===================================================================
# rearrange


def _rearrange_instance(config: RunConfig, i: int) -> _Acc:
    acc = _Acc(i)
    depth = config.depth
    k_mu, k_set = jr.split(instance_key(config.seed, i))
    delta = config.delta

    mu = random_boundary_measure(k_mu, depth, count=max(4, 1 << depth))
    lams = {9 * delta, 16 * delta, 32 * delta}
    if config.lam >= 9 * delta:
        lams.add(config.lam)
    for lam in sorted(lams):
        out = rearrange_2d(mu, delta, lam)
        cert = out.certificates()
        acc.row(
            family="rearrange",
            depth=depth,
            lam=lam,
            exceedance=len(out.exceedance),
            layers=len(out.layers),
            hardy_min=cert.hardy_min,
            norm_sq=cert.norm_sq,
            bound=cert.bound,
            constant=cert.constant,
        )
        acc.check(cert.covered, "rearrange-covers", lam=lam, hardy_min=cert.hardy_min)

    shape = TreeShape(depth)
    res = capacity(shape, random_box_union(k_set, depth), **config.solver_options())
    acc.certified(res.certified)
    if not res.certified:
        return acc
    try:
        table = energy_decay(res.equilibrium, _DECAY_DELTAS)
    except HypothesisError as err:
        acc.check(False, "decay-hypothesis", error=str(err))  # noqa: FBT003
    else:
        acc.row(
            family="decay",
            depth=depth,
            energy=table.energy,
            constant=table.max_normalized,
            witness=table.witness,
        )
    return acc


def run_rearrange(config: RunConfig, /) -> SuiteResult:
    """Bitree rearrangements of random boundary measures and energy decay tables."""

    def summary(rows: list[Row]) -> Row:
        return {
            "max_constant": _column_max(rows, "constant", family="rearrange"),
            "nonempty": sum(1 for r in rows if r.get("exceedance")),
            "decay_constant": _column_max(rows, "constant", family="decay"),
        }

    return _collect("rearrange", _run(config, _rearrange_instance), summary)


# ===================================================================
# maxprinciple


def _staircase_acc(config: RunConfig) -> _Acc:
    acc = _Acc("staircase")
    stairs = StaircaseConfig(config.base, config.steps)
    rep = build_staircase(stairs)
    acc.certified(rep.certified)
    acc.row(
        family="staircase",
        base=stairs.base,
        steps=stairs.steps,
        cap=rep.cap,
        omega_potential=rep.omega_potential,
        max_support_potential=rep.max_support_potential,
        sup_inf_ratio=rep.sup_inf_ratio,
        offdiag_row_bound=rep.offdiag_row_bound,
    )
    acc.check(rep.max_support_potential <= 1 + 1e-9, "staircase-support", v=rep.max_support_potential)
    acc.check(rep.omega_potential > 1, "staircase-overshoot", v=rep.omega_potential)
    acc.check(
        _rel(rep.omega_potential_direct, rep.omega_potential) <= 1e-9,
        "staircase-omega-identity",
        direct=rep.omega_potential_direct,
    )
    if stairs.base >= 20:  # noqa: PLR2004
        acc.check(rep.omega_potential >= 9 * stairs.steps / 50, "staircase-growth", v=rep.omega_potential)
        acc.check(rep.sup_inf_ratio <= 5, "staircase-balance", ratio=rep.sup_inf_ratio)  # noqa: PLR2004
        acc.check(rep.offdiag_row_bound <= 1 / 9, "staircase-offdiag", bound=rep.offdiag_row_bound)

    if dense_ok(stairs.shape):
        points = NodeSet(staircase_points(stairs))
        for lam in _MAXPRINCIPLE_LAMBDAS:
            qmp = quantitative_max_principle(stairs.shape, points, lam, solver=config.solver_options())
            acc.certified(qmp.certified)
            acc.row(family="qmp-staircase", lam=lam, scaled_ratio=qmp.scaled_ratio)
    return acc


def _union_instance(config: RunConfig, i: int) -> _Acc:
    acc = _Acc(i)
    shape = TreeShape(config.depth)
    target = random_box_union(instance_key(config.seed, i), config.depth)
    for lam in _MAXPRINCIPLE_LAMBDAS:
        qmp = quantitative_max_principle(shape, target, lam, solver=config.solver_options())
        acc.certified(qmp.certified)
        acc.row(
            family="qmp-union",
            depth=config.depth,
            lam=lam,
            exceedance=len(qmp.exceedance),
            max_potential=qmp.max_potential,
            scaled_ratio=qmp.scaled_ratio,
        )
    return acc


def run_maxprinciple(config: RunConfig, /) -> SuiteResult:
    """The staircase counterexample and exceedance capacities of random unions."""

    def summary(rows: list[Row]) -> Row:
        stairs = next(r for r in rows if r["family"] == "staircase")
        return {
            "omega_potential": stairs["omega_potential"],
            "max_scaled_ratio": _column_max(rows, "scaled_ratio"),
        }

    accs = [_staircase_acc(config), *_run(config, _union_instance)]
    return _collect("maxprinciple", accs, summary)


# ===================================================================
# carleson


def _grid_acc(config: RunConfig, depth: int) -> _Acc:
    acc = _Acc(f"grid-{depth}")
    rep = carleson_test(
        uniform_boundary_grid(depth),
        depth,
        config.strategies,
        seed=config.seed,
        solver=config.solver_options(),
    )
    acc.row(
        family="grid",
        depth=depth,
        norm_sq=rep.norm_sq,
        subcap=rep.subcap_constant,
        ratio=rep.ratio,
    )
    acc.check(rep.holds, "carleson-easy-direction", depth=depth)
    return acc


def _atoms_instance(config: RunConfig, i: int) -> _Acc:
    acc = _Acc(i)
    depth = config.depth
    k_atoms, k_pair = jr.split(instance_key(config.seed, i))
    seed = int(jr.randint(k_atoms, (), 0, 2**31 - 1))
    rep = carleson_test(
        random_atoms(seed, 16),
        depth,
        config.strategies,
        seed=config.seed,
        solver=config.solver_options(),
    )
    acc.row(
        family="atoms",
        depth=depth,
        norm_sq=rep.norm_sq,
        subcap=rep.subcap_constant,
        ratio=rep.ratio,
    )
    acc.check(rep.holds, "carleson-easy-direction", depth=depth)

    z, w = random_atoms(int(jr.randint(k_pair, (), 0, 2**31 - 1)), 2)
    cmp = kernel_vs_tree_check(z, w, depth)
    acc.row(family="kernel", depth=depth, ratio=cmp.ratio if cmp.is_finite else None)
    return acc


def run_carleson(config: RunConfig, /) -> SuiteResult:
    """Uniform-grid and random-atom Carleson reports plus kernel comparisons."""

    def summary(rows: list[Row]) -> Row:
        kernel = [r["ratio"] for r in rows if r["family"] == "kernel" and r["ratio"] is not None]
        return {
            "grid_max_ratio": _column_max(rows, "ratio", family="grid"),
            "kernel_min_ratio": min(kernel, default=None),
            "kernel_max_ratio": max(kernel, default=None),
        }

    depths = range(min(3, config.depth), config.depth + 1)
    accs = [
        *parallel_map(lambda d: _grid_acc(config, d), depths),
        *_run(config, _atoms_instance),
    ]
    return _collect("carleson", accs, summary)


# ===================================================================
# oracles


def _anchors_acc(config: RunConfig) -> _Acc:
    acc = _Acc("anchor")
    opts = config.solver_options()

    sci = sci_ratio(SparseFunction(TreeShape(1), {ROOT2: 1.0}), solver=opts)
    acc.row(check="sci-root", value=sci.ratio, expected=16 / 27)
    acc.check(_rel(sci.ratio, 16 / 27) <= 1e-6, "sci-root", value=sci.ratio)

    leaf = Node1(1, 0)
    table = energy_decay(Measure(TreeShape(1), {Node2(leaf, leaf): 0.25}), [0.25])
    e_delta = table.rows[0].restricted_energy
    acc.row(check="decay-hand", value=e_delta, expected=1 / 16)
    acc.check(
        _rel(table.energy, 0.25) <= 1e-12 and _rel(e_delta, 1 / 16) <= 1e-12,
        "decay-hand",
        energy=table.energy,
        restricted=e_delta,
    )

    stairs = build_staircase(StaircaseConfig(2, 2))
    acc.row(check="staircase-small", value=stairs.cap, expected=5 / 12)
    acc.check(
        _rel(stairs.cap, 5 / 12) <= 1e-9 and _rel(stairs.omega_potential, 5 / 3) <= 1e-9,
        "staircase-small",
        cap=stairs.cap,
        omega=stairs.omega_potential,
    )
    return acc


def _oracle_instance(config: RunConfig, i: int) -> _Acc:  # noqa: PLR0915
    acc = _Acc(i)
    depth = config.depth
    opts = config.solver_options()
    keys = jr.split(instance_key(config.seed, i), 8)

    # singleton capacity and the equilibrium conditions
    shape = TreeShape(depth)
    alpha = random_node2(keys[0], depth)
    problem = CapacityProblem(shape, [alpha], **opts)
    res = capacity(problem)
    acc.certified(res.certified)
    expected = 1 / ((alpha.x.level + 1) * (alpha.y.level + 1))
    acc.row(check="singleton", value=res.cap, expected=expected)
    acc.check(_rel(res.cap, expected) <= 1e-8, "singleton", node=alpha, cap=res.cap)
    if res.certified:
        kkt = kkt_report(res, problem)
        acc.check(kkt.holds(1e-6), "kkt", min_potential=kkt.min_potential)

    # dual solver against the conductance recursion
    tree = TreeShape(min(depth, 8), ndim=1)
    leaves = random_leaf_set(keys[1], tree.depth)
    dual = capacity(tree, leaves, **opts)
    exact = capacity_tree_exact(tree, leaves)
    acc.certified(dual.certified)
    acc.row(check="tree-exact", value=dual.cap, expected=exact.cap)
    acc.check(_rel(dual.cap, exact.cap) <= 1e-7, "tree-exact", dual=dual.cap, exact=exact.cap)

    # dual solver against the atomic Gram solver on a sparse shape
    deep = TreeShape(_SPARSE_DEPTH)
    size = int(jr.randint(keys[2], (), 1, 13))
    points = sorted(
        {
            Node2(random_node1(kx, _SPARSE_DEPTH), random_node1(ky, _SPARSE_DEPTH))
            for kx, ky in jr.split(keys[3], (size, 2))
        }
    )
    dual = capacity(deep, points, **opts)
    atomic = capacity_atomic(points, deep)
    acc.certified(dual.certified and atomic.certified)
    acc.row(check="atomic", value=dual.cap, expected=atomic.cap)
    acc.check(_rel(dual.cap, atomic.cap) <= 1e-7, "atomic", dual=dual.cap, atomic=atomic.cap)

    # one-tree maximum and domination principles
    rho = random_measure(keys[4], tree)
    gap = max_principle_gap(rho)
    acc.row(check="max-principle", value=gap, expected=0.0)
    acc.check(gap <= 1e-12, "max-principle", gap=gap)

    f = random_superharmonic(keys[5], tree.depth)
    nu = random_measure(keys[6], tree)
    support = nu.support()
    pot, hf = potential(nu, support), hardy(f, support)
    scale = min(hf[n] / pot[n] for n in support)
    nu = nu.scale(scale * (1 - 1e-9))
    try:
        dominated = domination_holds(f, nu)
    except BicapError:
        dominated = False
    acc.row(check="domination", value=float(dominated), expected=1.0)
    acc.check(dominated, "domination", scale=scale)

    # disintegration sandwich
    small = TreeShape(min(depth, 4))
    mu = random_measure(keys[7], small)
    mub = disintegrate_to_boundary(mu)
    everywhere = NodeSet(small.nodes())
    v, vb = potential(mu, everywhere), potential(mub, everywhere)
    worst = max(vb[n] / v[n] for n in everywhere if v[n] > 0)
    below = all(v[n] <= vb[n] * (1 + 1e-12) + 1e-15 for n in everywhere)
    acc.row(check="sandwich", value=worst, expected=9.0)
    acc.check(
        below and worst <= 9 * (1 + 1e-12) and abs(mub.total() - mu.total()) <= 1e-12,
        "sandwich",
        worst=worst,
    )
    return acc


def run_oracles(config: RunConfig, /) -> SuiteResult:
    """Cross-solver agreement, exact anchors and one-tree principles."""

    def summary(rows: list[Row]) -> Row:
        worst: Row = {}
        for r in rows:
            if r["check"] in {"singleton", "tree-exact", "atomic"}:
                err = _rel(r["value"], r["expected"])
                worst[r["check"]] = max(worst.get(r["check"], 0.0), err)
        return {f"max_rel_{k}": v for k, v in sorted(worst.items())}

    accs = [_anchors_acc(config), *_run(config, _oracle_instance)]
    return _collect("oracles", accs, summary)


# ===================================================================

SUITES: Final[dict[str, Callable[[RunConfig], SuiteResult]]] = {
    "sci": run_sci,
    "rearrange": run_rearrange,
    "maxprinciple": run_maxprinciple,
    "carleson": run_carleson,
    "oracles": run_oracles,
}


def run_suite(config: RunConfig, /) -> SuiteResult:
    """Run the suite named by ``config.suite``."""
    if config.suite not in SUITES:
        msg = f"unknown suite {config.suite!r}"
        raise ValueError(msg)
    logger.info("running suite %s with seed %d", config.suite, config.seed)
    return SUITES[config.suite](config)
