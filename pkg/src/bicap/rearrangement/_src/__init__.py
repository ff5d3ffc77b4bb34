"""Rearrangement constructions for restricted potentials."""
