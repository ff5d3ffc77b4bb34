""":mod:`bicap.bridge`: from atoms on the closed bidisc to measures on the bitree."""

__all__ = [
    # points
    "BidiscAtom",
    "CarlesonBoxMap",
    "node_of_point",
    "pullback_measure",
    "uniform_boundary_grid",
    "random_atoms",
    # checks
    "KernelComparison",
    "kernel_vs_tree_check",
    "CarlesonReport",
    "carleson_test",
]

from jaxtyping import install_import_hook

from bicap.setup_package import RUNTIME_TYPECHECKER

with install_import_hook("bicap.bridge", RUNTIME_TYPECHECKER):
    from ._src.checks import (
        CarlesonReport,
        KernelComparison,
        carleson_test,
        kernel_vs_tree_check,
    )
    from ._src.points import (
        BidiscAtom,
        CarlesonBoxMap,
        node_of_point,
        pullback_measure,
        random_atoms,
        uniform_boundary_grid,
    )
