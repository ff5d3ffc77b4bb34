""":mod:`bicap.capacity`: capacities and equilibrium measures."""

__all__ = [
    # problems
    "CapacityProblem",
    "CapacityResult",
    "AtomicProblem",
    "gram_matrix",
    # kernels
    "AbstractKernel",
    "GramKernel",
    "TreeKernel",
    "KernelKind",
    "make_kernel",
    # solvers
    "AbstractCapacitySolver",
    "DualCapacitySolver",
    "DualState",
    "duality_gap",
    "capacity",
    "ExactCapacity",
    "capacity_tree_exact",
    "capacity_atomic",
    # boundary
    "boundary_projection",
    "disintegrate_to_boundary",
    "martingale_ratio_check",
    # reports
    "KKTReport",
    "kkt_report",
    "GrandparentReport",
    "grandparent_ratio",
]

from jaxtyping import install_import_hook

from bicap.setup_package import RUNTIME_TYPECHECKER

with install_import_hook("bicap.capacity", RUNTIME_TYPECHECKER):
    from ._src.atomic import capacity_atomic
    from ._src.boundary import (
        boundary_projection,
        disintegrate_to_boundary,
        martingale_ratio_check,
    )
    from ._src.compare import GrandparentReport, KKTReport, grandparent_ratio, kkt_report
    from ._src.exact import ExactCapacity, capacity_tree_exact
    from ._src.kernels import (
        AbstractKernel,
        GramKernel,
        KernelKind,
        TreeKernel,
        make_kernel,
    )
    from ._src.problem import AtomicProblem, CapacityProblem, CapacityResult, gram_matrix
    from ._src.solver import (
        AbstractCapacitySolver,
        DualCapacitySolver,
        DualState,
        capacity,
        duality_gap,
    )
