"""Exact verification toolkit for intersection bounds in GL(n,q)."""

__version__ = "0.1.0"
