"""Exact calculus for spaces of scalar multiples of isometries."""

__version__ = "0.1.0"
