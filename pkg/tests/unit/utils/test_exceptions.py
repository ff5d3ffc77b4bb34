"""Test :mod:`bicap.utils.exceptions`."""

import pytest

from bicap.utils.exceptions import (
    BicapError,
    HypothesisError,
    InvariantViolationError,
    NotCertifiedError,
)


@pytest.mark.parametrize(
    ("cls", "base"),
    [
        (HypothesisError, ValueError),
        (NotCertifiedError, RuntimeError),
        (InvariantViolationError, AssertionError),
    ],
)
def test_hierarchy(cls: type[BicapError], base: type[Exception]) -> None:
    assert issubclass(cls, BicapError)
    assert issubclass(cls, base)


def test_instance_defaults_to_empty() -> None:
    assert InvariantViolationError("x").instance == {}
