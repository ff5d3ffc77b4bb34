""":mod:`bicap.counterexamples`: failures of the maximum and domination principles."""

__all__ = [
    "StaircaseConfig",
    "StaircaseReport",
    "staircase_points",
    "build_staircase",
    "DominationFailure",
    "domination_failure",
]

from jaxtyping import install_import_hook

from bicap.setup_package import RUNTIME_TYPECHECKER

with install_import_hook("bicap.counterexamples", RUNTIME_TYPECHECKER):
    from ._src.domination import DominationFailure, domination_failure
    from ._src.staircase import (
        StaircaseConfig,
        StaircaseReport,
        build_staircase,
        staircase_points,
    )
