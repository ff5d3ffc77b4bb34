"""Copyright (c) 2024 bicap maintainers. All rights reserved."""

__all__ = [
    "__version__",
    "__version_tuple__",
    # Modules
    "bitree",
    "potential",
    "capacity",
    "sci",
    "rearrangement",
    "counterexamples",
    "bridge",
    "io",
    "utils",
    "typing",
]

from . import setup_package as setup_package

# isort: split
from . import (
    bitree,
    bridge,
    capacity,
    counterexamples,
    io,
    potential,
    rearrangement,
    sci,
    typing,
    utils,
)
from ._version import version as __version__, version_tuple as __version_tuple__
