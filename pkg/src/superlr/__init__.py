"""Exact computations for restricted Lie-Rinehart superalgebras in characteristic p."""

__version__ = "0.1.0"
