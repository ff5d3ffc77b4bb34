"""bicap package setup.

Copyright (c) 2024 bicap maintainers. All rights reserved.
"""

__all__ = ["RUNTIME_TYPECHECKER", "MAX_THREADS"]

import os
from typing import Final

from jax import config

config.update("jax_enable_x64", True)  # noqa: FBT003


RUNTIME_TYPECHECKER: Final[str | None] = (
    v
    if (v := os.environ.get("BICAP_ENABLE_RUNTIME_TYPECHECKING", None)) != "None"
    else None
)
"""Runtime type checking variable "BICAP_ENABLE_RUNTIME_TYPECHECKING".

Set to "None" to disable runtime typechecking (default). Set to
"beartype.beartype" to enable runtime typechecking.

See https://docs.kidger.site/jaxtyping/api/runtime-type-checking for more
information on options.

"""


def _max_threads() -> int:
    raw = os.environ.get("BICAP_THREADS", "")
    if not raw:
        return min(8, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        msg = f"BICAP_THREADS must be a positive integer, got {raw!r}"
        raise ValueError(msg) from None
    if value < 1:
        msg = f"BICAP_THREADS must be a positive integer, got {raw!r}"
        raise ValueError(msg)
    return value


MAX_THREADS: Final[int] = _max_threads()
"""Worker-thread cap from "BICAP_THREADS" (default ``min(8, cpu_count)``)."""
