"""Exact finite-dimensional checks for positive commutators AB >= BA >= 0."""

__version__ = "0.1.0"
