""":mod:`bicap.potential`: Hardy operators, potentials and energies."""

__all__ = [
    # fields
    "AbstractNodeMap",
    "SparseFunction",
    "Measure",
    "PotentialField",
    # dense operators
    "subtree_sum",
    "ancestor_sum",
    "coI_dense",
    "hardy_dense",
    "potential_dense",
    "energy_dense",
    "parent_mask",
    # sparse api
    "hardy",
    "coI",
    "coI_function",
    "hardy_function",
    "potential",
    "restricted_potential",
    "level_set_Edelta",
    "restricted_energy",
    "energy",
    "mutual_energy",
    "weighted_adjoint",
    "pairing",
    "dense_ok",
    # trace norm
    "TraceNormResult",
    "trace_norm_estimate",
    # principles
    "superharmonic_check",
    "max_principle_gap",
    "domination_holds",
]

from jaxtyping import install_import_hook

from bicap.setup_package import RUNTIME_TYPECHECKER

with install_import_hook("bicap.potential", RUNTIME_TYPECHECKER):
    from ._src.api import (
        coI,
        coI_function,
        dense_ok,
        energy,
        hardy,
        hardy_function,
        level_set_Edelta,
        mutual_energy,
        pairing,
        potential,
        restricted_energy,
        restricted_potential,
        weighted_adjoint,
    )
    from ._src.fields import AbstractNodeMap, Measure, PotentialField, SparseFunction
    from ._src.operators import (
        ancestor_sum,
        coI_dense,
        energy_dense,
        hardy_dense,
        parent_mask,
        potential_dense,
        subtree_sum,
    )
    from ._src.principles import domination_holds, max_principle_gap, superharmonic_check
    from ._src.trace import TraceNormResult, trace_norm_estimate
