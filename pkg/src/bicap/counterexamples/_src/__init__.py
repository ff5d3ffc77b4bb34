"""Explicit failures of the bitree maximum and domination principles."""
