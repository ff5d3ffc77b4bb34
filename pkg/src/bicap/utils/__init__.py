""":mod:`bicap.utils`: shared helpers."""

__all__ = [
    "exceptions",
    "parallel_map",
    "power_iteration",
    "PowerIterationResult",
]

from . import exceptions
from ._concurrency import parallel_map
from ._linalg import PowerIterationResult, power_iteration
