""":mod:`bicap.sci`: level sets, the strong capacitary inequality and trace checks."""

__all__ = [
    # level sets
    "LevelSet",
    "LevelSetFamily",
    "level_sets",
    "dyadic_range",
    # sci
    "SciRow",
    "SciReport",
    "sci_ratio",
    # trace
    "TraceCheck",
    "trace_upper_bound_check",
    "SubcapResult",
    "SubcapStrategy",
    "subcap_constant",
    "box_mass",
    # mixed energies
    "MixedEnergyReport",
    "mixed_energy_check",
    "DiagonalReport",
    "diagonal_domination_check",
]

from jaxtyping import install_import_hook

from bicap.setup_package import RUNTIME_TYPECHECKER

with install_import_hook("bicap.sci", RUNTIME_TYPECHECKER):
    from ._src.levelsets import LevelSet, LevelSetFamily, dyadic_range, level_sets
    from ._src.mixed import (
        DiagonalReport,
        MixedEnergyReport,
        diagonal_domination_check,
        mixed_energy_check,
    )
    from ._src.report import SciReport, SciRow, sci_ratio
    from ._src.trace import (
        SubcapResult,
        SubcapStrategy,
        TraceCheck,
        box_mass,
        subcap_constant,
        trace_upper_bound_check,
    )
