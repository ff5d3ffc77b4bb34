"""Bidisc discretization and Carleson-measure testing."""
