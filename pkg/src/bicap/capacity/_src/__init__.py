"""Capacity solvers."""
