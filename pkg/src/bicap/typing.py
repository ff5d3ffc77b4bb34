"""Type hints for bicap.

As indicated by `__all__`, this module does not export any names. The type hints
defined here may be changed or removed without notice. They are intended for use
in other modules within the `bicap` package.

Notes
-----
- Dense tree arrays are heap ordered: vertex ``(level, pos)`` lives at index
  ``2**level - 1 + pos``.
- Bitree arrays carry one heap axis per coordinate.

"""

__all__: list[str] = []

from typing import TypeAlias

from jaxtyping import Array, Bool, Float

# =============================================================================
# Scalars

FloatSz0: TypeAlias = Float[Array, ""]

# =============================================================================
# Dense tree arrays

# One tree or a bitree, heap ordered along each axis
HeapArray: TypeAlias = Float[Array, "N"] | Float[Array, "N N"]

# =============================================================================
# Solver vectors

AtomVector: TypeAlias = Float[Array, "n"]
AtomMask: TypeAlias = Bool[Array, "n"]
GramMatrix: TypeAlias = Float[Array, "n n"]
