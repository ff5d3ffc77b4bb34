""":mod:`bicap.bitree`: index arithmetic for truncated trees and bitrees."""

__all__ = [
    # nodes
    "Node1",
    "Node2",
    "ROOT1",
    "ROOT2",
    "AnyNode",
    "prefix",
    # shape
    "TreeShape",
    # sets
    "NodeSet",
    "SetKind",
    "boundary_below",
    # order
    "meet1",
    "meet2",
    "ancestor_count",
    "ancestor_count2",
    "common_ancestor_count",
    "is_ancestor",
    "in_successors",
    "predecessors",
    "successors",
    "meet_count_matrix",
    # metric
    "metric_delta",
    # graph
    "g_predecessors",
    "g_ancestor_count",
    # automorphisms
    "TreeAutomorphism",
    "random_automorphism",
]

from jaxtyping import install_import_hook

from bicap.setup_package import RUNTIME_TYPECHECKER

with install_import_hook("bicap.bitree", RUNTIME_TYPECHECKER):
    from ._src.automorphism import TreeAutomorphism, random_automorphism
    from ._src.graph import g_ancestor_count, g_predecessors
    from ._src.metric import metric_delta
    from ._src.nodes import ROOT1, ROOT2, AnyNode, Node1, Node2, prefix
    from ._src.nodeset import NodeSet, SetKind, boundary_below
    from ._src.ops import (
        ancestor_count,
        ancestor_count2,
        common_ancestor_count,
        in_successors,
        is_ancestor,
        meet1,
        meet2,
        meet_count_matrix,
        predecessors,
        successors,
    )
    from ._src.shape import TreeShape
