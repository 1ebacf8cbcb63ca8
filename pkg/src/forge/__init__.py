"""Exact p-adic division-algebra, Lie and cohomology computations."""

__version__ = "0.1.0"
