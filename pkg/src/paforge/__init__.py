"""Permutation arrays from fractional maps over finite fields and from groups."""

__version__ = "0.1.0"
