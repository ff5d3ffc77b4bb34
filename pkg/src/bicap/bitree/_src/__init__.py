"""Private implementation of :mod:`bicap.bitree`."""
