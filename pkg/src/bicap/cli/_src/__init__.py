"""Private implementation of :mod:`bicap.cli`."""
