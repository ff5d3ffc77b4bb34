""":mod:`bicap.rearrangement`: rearranged potentials and their certificates."""

__all__ = [
    # one tree
    "StoppingSet",
    "stopping_set",
    "rearrange_1d",
    "OneDimCertificate",
    "certify_1d",
    # bitree
    "LayerRecord",
    "RearrangementCertificates",
    "RearrangementOutput",
    "rearrange_2d",
    "layer_norm_sum",
    # consequences
    "MaxPrincipleReport",
    "quantitative_max_principle",
    "DecayRow",
    "EnergyDecayTable",
    "energy_decay",
]

from jaxtyping import install_import_hook

from bicap.setup_package import RUNTIME_TYPECHECKER

with install_import_hook("bicap.rearrangement", RUNTIME_TYPECHECKER):
    from ._src.decay import DecayRow, EnergyDecayTable, energy_decay
    from ._src.maxprinciple import MaxPrincipleReport, quantitative_max_principle
    from ._src.one_dim import (
        OneDimCertificate,
        StoppingSet,
        certify_1d,
        rearrange_1d,
        stopping_set,
    )
    from ._src.two_dim import (
        LayerRecord,
        RearrangementCertificates,
        RearrangementOutput,
        layer_norm_sum,
        rearrange_2d,
    )
