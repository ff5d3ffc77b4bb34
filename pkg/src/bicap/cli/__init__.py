""":mod:`bicap.cli`: the ``bicap`` command line and its experiment suites."""

__all__ = [
    "main",
    "build_parser",
    "RunConfig",
    "SuiteResult",
    "SUITES",
    "run_suite",
    "EXIT_OK",
    "EXIT_INPUT",
    "EXIT_UNCERTIFIED",
    "EXIT_VIOLATION",
]

from jaxtyping import install_import_hook

from bicap.setup_package import RUNTIME_TYPECHECKER

with install_import_hook("bicap.cli", RUNTIME_TYPECHECKER):
    from ._src.config import RunConfig
    from ._src.main import (
        EXIT_INPUT,
        EXIT_OK,
        EXIT_UNCERTIFIED,
        EXIT_VIOLATION,
        build_parser,
        main,
    )
    from ._src.suites import SUITES, SuiteResult, run_suite
