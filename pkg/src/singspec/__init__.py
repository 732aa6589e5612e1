"""Orthogonal-polynomial expansions of functions with algebraic-logarithmic singularities."""

__version__ = "0.1.0"
