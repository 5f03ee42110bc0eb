"""Exact Hamming-completeness reductions and solvers for (+,<>) products."""

__version__ = "0.1.0"
