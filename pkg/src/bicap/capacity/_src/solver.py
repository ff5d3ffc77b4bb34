"""Dual projected-gradient capacity solver.

The capacity of a target with constraint points ``alpha_i`` is

    cap E = max over mu >= 0 of  2 mu(E) - E[mu],

a concave quadratic whose gradient is ``2 (1 - V^mu(alpha_i))``. In the
normalized weights ``w = k mu`` (``k`` the largest meet count on the points)
the problem reads ``min w' G' w - 2 sum(w)`` over ``w >= 0``.

"""

__all__ = [
    "AbstractCapacitySolver",
    "DualCapacitySolver",
    "DualState",
    "duality_gap",
    "capacity",
]

import abc
import logging
from collections.abc import Mapping
from typing import Any

import equinox as eqx
import jax
import jax.numpy as jnp
from plum import dispatch

from .kernels import AbstractKernel, KernelKind, make_kernel
from .problem import CapacityProblem, CapacityResult
from bicap.bitree import NodeSet, TreeShape
from bicap.potential import Measure
from bicap.typing import AtomMask, AtomVector, FloatSz0
from bicap.utils import power_iteration
from bicap.utils.exceptions import NotCertifiedError

logger = logging.getLogger(__name__)

# Gap below which the support of the iterate is solved exactly.
_POLISH_GAP = 1e-2


class AbstractCapacitySolver(eqx.Module):
    """ABC for capacity solvers.

    Notes
    -----
    The ``init``, ``step``, and ``solve`` methods are abstract and should be
    implemented by subclasses.

    """

    @abc.abstractmethod
    def init(self, *args: Any, **kwargs: Any) -> Any:
        """Initialize the solver."""
        raise NotImplementedError

    @abc.abstractmethod
    def step(self, *args: Any, **kwargs: Any) -> Any:
        """Step the solver."""
        raise NotImplementedError

    @abc.abstractmethod
    def solve(self, *args: Any, **kwargs: Any) -> Any:
        """Solve, initializing and stepping to the solution."""
        raise NotImplementedError

    # ==================================================================
    # Convenience methods

    @classmethod
    @dispatch.abstract
    def from_(
        cls: "type[AbstractCapacitySolver]", *args: Any, **kwargs: Any
    ) -> "AbstractCapacitySolver":
        """Create a new solver from the argument."""
        raise NotImplementedError  # pragma: no cover


# =========================================================
# Constructors


@AbstractCapacitySolver.from_.dispatch
def from_(
    cls: type[AbstractCapacitySolver], solver: AbstractCapacitySolver
) -> AbstractCapacitySolver:
    """Create a new solver from the argument.

    Examples
    --------
    >>> from bicap.capacity import AbstractCapacitySolver, DualCapacitySolver
    >>> solver = DualCapacitySolver()
    >>> DualCapacitySolver.from_(solver) is solver
    True

    >>> class MySolver(AbstractCapacitySolver):
    ...     def init(self, *args, **kwargs): pass
    ...     def step(self, *args, **kwargs): pass
    ...     def solve(self, *args, **kwargs): pass
    >>> try: new_solver = MySolver.from_(solver)
    ... except TypeError as e: print(e)
    Cannot convert <class 'bicap.capacity...DualCapacitySolver'> to <class '...MySolver'>

    """
    if not isinstance(solver, cls):
        msg = f"Cannot convert {type(solver)} to {cls}"
        raise TypeError(msg)

    return solver


@AbstractCapacitySolver.from_.dispatch
def from_(  # noqa: F811
    cls: type[AbstractCapacitySolver], obj: Mapping[str, Any]
) -> AbstractCapacitySolver:
    """Create a new solver from keyword options.

    Examples
    --------
    >>> from bicap.capacity import DualCapacitySolver
    >>> DualCapacitySolver.from_({"kernel": "gram"}).kernel
    'gram'

    """
    return cls(**obj)


# =========================================================


class DualState(eqx.Module):
    """Iterate of the accelerated projected-gradient method."""

    w: AtomVector
    """Current weights, ``w >= 0``."""

    y: AtomVector
    """Extrapolated point the next gradient is taken at."""

    momentum: FloatSz0


def duality_gap(kernel: AbstractKernel, w: AtomVector, /) -> tuple[float, float, float]:
    """Relative gap between the dual value and the primal upper bound.

    With ``s = sum(w)``, ``e = w' G' w`` and ``m = min G' w``, the best
    multiple of ``w`` gives the lower bound ``s**2 / e`` and ``w / m`` is
    feasible with energy ``e / m**2``.

    Returns
    -------
    tuple[float, float, float]
        ``(gap, s, e)`` in normalized units.

    """
    v = kernel.matvec(w)
    s = float(jnp.sum(w))
    e = float(jnp.vdot(w, v))
    m = float(jnp.min(v))
    if s <= 0 or e <= 0 or m <= 0:
        return 1.0, s, e
    return max(0.0, 1.0 - (s * m / e) ** 2), s, e


class DualCapacitySolver(AbstractCapacitySolver):
    """Accelerated projected gradient on the capacity dual.

    Steps are ``1 / (2 lambda_max(G'))`` with FISTA momentum and a gradient
    restart. Every ``check_every`` steps the duality gap is evaluated and,
    with ``polish``, the support of the iterate is solved exactly; a polished
    point is accepted only when it is non-negative and feasible.

    Examples
    --------
    >>> from bicap.bitree import NodeSet, TreeShape, ROOT2
    >>> from bicap.capacity import CapacityProblem, DualCapacitySolver
    >>> shape = TreeShape(1)
    >>> corners = NodeSet([ROOT2], kind="boundary")
    >>> res = DualCapacitySolver().solve(CapacityProblem(shape, corners))
    >>> round(res.cap, 9), res.certified
    (0.444444444, True)

    """

    tol: float | None = None
    """Gap tolerance; `None` uses the problem's."""

    max_iters: int | None = None
    """Iteration cap; `None` uses the problem's."""

    kernel: KernelKind = eqx.field(default="auto", static=True)
    accelerate: bool = eqx.field(default=True, static=True)
    polish: bool = eqx.field(default=True, static=True)
    check_every: int = eqx.field(default=25, static=True)

    def init(self, kernel: AbstractKernel, /) -> DualState:
        """Start from ``1 / rowsum``, scaled to the best multiple."""
        w = 1.0 / kernel.row_sums()
        v = kernel.matvec(w)
        w = w * jnp.sum(w) / jnp.vdot(w, v)
        return DualState(w=w, y=w, momentum=jnp.asarray(1.0))

    def step(self, kernel: AbstractKernel, state: DualState, step_size: float, /) -> DualState:
        """One projected-gradient step taken at the extrapolated point."""
        grad = 2.0 * (kernel.matvec(state.y) - 1.0)
        w = jnp.maximum(state.y - step_size * grad, 0.0)
        if not self.accelerate:
            return DualState(w=w, y=w, momentum=state.momentum)
        t = (1.0 + jnp.sqrt(1.0 + 4.0 * state.momentum**2)) / 2.0
        y = w + ((state.momentum - 1.0) / t) * (w - state.w)
        # restart when the step goes against the gradient
        restart = jnp.vdot(grad, w - state.w) > 0
        return DualState(
            w=w,
            y=jnp.where(restart, w, y),
            momentum=jnp.where(restart, 1.0, t),
        )

    @eqx.filter_jit
    def _run(
        self, kernel: AbstractKernel, state: DualState, step_size: float, n_steps: int
    ) -> DualState:
        return jax.lax.fori_loop(
            0, n_steps, lambda _, s: self.step(kernel, s, step_size), state
        )

    def _lipschitz(self, kernel: AbstractKernel) -> float:
        """Upper bound on ``2 lambda_max(G')``."""
        rows = kernel.row_sums()
        out = power_iteration(kernel.matvec, rows, tol=1e-6, max_iters=500)
        # entries are non-negative, so the largest row sum bounds lambda_max
        lam = 1.02 * out.eigenvalue if out.converged else float(jnp.max(rows))
        return 2.0 * min(lam, float(jnp.max(rows)))

    def _polish(self, kernel: AbstractKernel, w: AtomVector, tol: float) -> AtomVector | None:
        support = w > 0
        for _ in range(8):
            if not bool(jnp.any(support)):
                return None
            z = kernel.solve_on(support)
            negative = support & (z <= 0)
            if not bool(jnp.any(negative)):
                break
            support = support & ~negative
        else:
            return None
        if not bool(jnp.all(jnp.isfinite(z))):
            return None
        if float(jnp.min(kernel.matvec(z))) < 1.0 - tol / 4:
            return None
        return z

    def solve(
        self, problem: CapacityProblem, /, *, require_certified: bool = False
    ) -> CapacityResult:
        """Compute the capacity of ``problem``.

        Raises
        ------
        NotCertifiedError
            If ``require_certified`` and the gap stayed above the tolerance.
        """
        tol = problem.tol if self.tol is None else self.tol
        max_iters = problem.max_iters if self.max_iters is None else self.max_iters
        points = problem.constraint_points()
        if not points:
            return CapacityResult(
                cap=0.0,
                equilibrium=Measure(problem.shape, {}),
                gap=0.0,
                iterations=0,
                certified=True,
            )

        kernel = make_kernel(problem.shape, points, self.kernel)
        step_size = 1.0 / self._lipschitz(kernel)
        state = self.init(kernel)
        gap, s, _ = duality_gap(kernel, state.w)
        iterations = 0
        tried: AtomMask | None = None
        while gap >= tol and iterations < max_iters:
            n_steps = min(self.check_every, max_iters - iterations)
            state = self._run(kernel, state, step_size, n_steps)
            iterations += n_steps
            gap, s, _ = duality_gap(kernel, state.w)
            logger.debug("iteration %d: gap=%.3e mass=%.12g", iterations, gap, s)
            support = state.w > 0
            if (
                self.polish
                and tol <= gap < _POLISH_GAP
                and (tried is None or not bool(jnp.array_equal(support, tried)))
            ):
                tried = support
                z = self._polish(kernel, state.w, tol)
                if z is not None:
                    state = DualState(w=z, y=z, momentum=jnp.asarray(1.0))
                    gap, s, _ = duality_gap(kernel, z)
                    logger.debug("polished support: gap=%.3e", gap)

        certified = gap < tol
        cap = s / kernel.scale
        w = state.w.tolist()
        equilibrium = Measure(
            problem.shape,
            {p: wi / kernel.scale for p, wi in zip(points, w, strict=True) if wi > 0},
        )
        log = logger.info if certified else logger.warning
        log(
            "capacity: cap=%.12g gap=%.3e iterations=%d points=%d kernel=%s",
            cap,
            gap,
            iterations,
            len(points),
            type(kernel).__name__,
        )
        if require_certified and not certified:
            msg = f"capacity solve stopped at gap {gap:.3e} > tol {tol:.1e}"
            raise NotCertifiedError(msg)
        return CapacityResult(
            cap=cap,
            equilibrium=equilibrium,
            gap=gap,
            iterations=iterations,
            certified=certified,
        )


# =========================================================


@dispatch
def capacity(
    problem: CapacityProblem,
    /,
    *,
    solver: AbstractCapacitySolver | Mapping[str, Any] | None = None,
    require_certified: bool = False,
) -> CapacityResult:
    """Capacity and equilibrium measure of a target set.

    Examples
    --------
    >>> from bicap.bitree import ROOT2, Node1, Node2, TreeShape
    >>> from bicap.capacity import capacity
    >>> a = Node1(1, 0)
    >>> round(capacity(TreeShape(1), [Node2(a, a)]).cap, 9)
    0.25
    >>> res = capacity(TreeShape(1), [ROOT2])
    >>> round(res.cap, 9), res.primal[ROOT2]
    (1.0, 1.0)

    """
    solver_ = DualCapacitySolver.from_({} if solver is None else solver)
    return solver_.solve(problem, require_certified=require_certified)


@dispatch
def capacity(  # noqa: F811
    shape: TreeShape, target: Any, /, **kwargs: Any
) -> CapacityResult:
    problem_kw = {k: kwargs.pop(k) for k in ("tol", "max_iters") if k in kwargs}
    target_ = target if isinstance(target, NodeSet) else NodeSet(target)
    return capacity(CapacityProblem(shape, target_, **problem_kw), **kwargs)
