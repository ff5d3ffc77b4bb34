"""Run configuration shared by every command."""

__all__ = ["RunConfig", "SUITE_NAMES"]

import argparse
from collections.abc import Mapping
from typing import Any, Final

import equinox as eqx
from plum import dispatch

SUITE_NAMES: Final = ("sci", "rearrange", "maxprinciple", "carleson", "oracles")


def _strategies(obj: Any) -> tuple[str, ...]:
    if isinstance(obj, str):
        return tuple(s.strip() for s in obj.split(",") if s.strip())
    return tuple(obj)


class RunConfig(eqx.Module):
    """Everything a command needs to reproduce its output.

    Examples
    --------
    >>> from bicap.cli import RunConfig
    >>> cfg = RunConfig.from_({"command": "suite", "suite": "sci", "depth": 3})
    >>> cfg.depth, cfg.solver_options()
    (3, {'tol': 1e-08, 'max_iters': 20000})

    """

    command: str = eqx.field(static=True)
    suite: str | None = eqx.field(default=None, static=True)
    depth: int = eqx.field(default=4, static=True)
    tol: float = eqx.field(default=1e-8, static=True)
    max_iters: int = eqx.field(default=20_000, static=True)
    seed: int = eqx.field(default=0, static=True)
    base: int = eqx.field(default=2, static=True)
    steps: int = eqx.field(default=2, static=True)
    lam: float = eqx.field(default=9.0, static=True)
    delta: float = eqx.field(default=1.0, static=True)
    count: int = eqx.field(default=20, static=True)
    input: str | None = eqx.field(default=None, static=True)
    out: str | None = eqx.field(default=None, static=True)
    strategies: tuple[str, ...] = eqx.field(
        default=("single-box",), static=True, converter=_strategies
    )
    replay: str | None = eqx.field(default=None, static=True)

    def __check_init__(self) -> None:
        if self.suite is not None and self.suite not in SUITE_NAMES:
            msg = f"unknown suite {self.suite!r}; expected one of {SUITE_NAMES}"
            raise ValueError(msg)
        if self.depth < 1:
            msg = f"depth must be >= 1, got {self.depth}"
            raise ValueError(msg)
        if not self.tol > 0:
            msg = f"tol must be positive, got {self.tol}"
            raise ValueError(msg)
        if self.count < 0:
            msg = f"count must be non-negative, got {self.count}"
            raise ValueError(msg)

    def solver_options(self) -> dict[str, Any]:
        """Keyword overrides for the capacity solver."""
        return {"tol": self.tol, "max_iters": self.max_iters}

    def replace(self, **changes: Any) -> "RunConfig":
        fields = {name: getattr(self, name) for name in _FIELDS}
        fields.update(changes)
        return RunConfig(**fields)

    @classmethod
    @dispatch.abstract
    def from_(cls: "type[RunConfig]", *args: Any, **kwargs: Any) -> "RunConfig":
        """Construct from parsed arguments or a JSON record."""
        raise NotImplementedError  # pragma: no cover


_FIELDS: Final = tuple(RunConfig.__dataclass_fields__)


@RunConfig.from_.dispatch
def from_(cls: type[RunConfig], obj: Mapping[str, Any], /) -> RunConfig:
    """Keys outside the config are ignored, so replay files stay loadable."""
    return cls(**{k: v for k, v in obj.items() if k in _FIELDS and v is not None})


@RunConfig.from_.dispatch
def from_(cls: type[RunConfig], ns: argparse.Namespace, /) -> RunConfig:  # noqa: F811
    return RunConfig.from_(vars(ns))
