"""Exceptions and warnings raised by :mod:`bicap`."""

__all__ = [
    "BicapError",
    "HypothesisError",
    "InvariantViolationError",
    "NotCertifiedError",
    "BicapWarning",
]

from collections.abc import Mapping
from typing import Any


class BicapError(Exception):
    """Base class for :mod:`bicap` errors."""


class HypothesisError(BicapError, ValueError):
    """A mathematical precondition of a construction does not hold.

    Examples
    --------
    >>> from bicap.utils.exceptions import HypothesisError
    >>> isinstance(HypothesisError("V > delta on supp f"), ValueError)
    True

    """


class NotCertifiedError(BicapError, RuntimeError):
    """An iterative solve stopped before its certificate was met."""


class InvariantViolationError(BicapError, AssertionError):
    """A hard invariant failed on a concrete instance.

    The offending instance is kept on the exception so that it can be written
    out and replayed.

    Examples
    --------
    >>> from bicap.utils.exceptions import InvariantViolationError
    >>> err = InvariantViolationError("trace", {"seed": 3})
    >>> err.instance
    {'seed': 3}
    >>> str(err)
    'trace'

    """

    def __init__(self, message: str, instance: Mapping[str, Any] | None = None) -> None:
        super().__init__(message)
        self.instance: dict[str, Any] = dict(instance or {})


class BicapWarning(UserWarning):
    """Recoverable notice: merged inputs, reordered arguments, slow convergence."""
