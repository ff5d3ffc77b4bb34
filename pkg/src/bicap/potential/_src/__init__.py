"""Private implementation of :mod:`bicap.potential`."""
