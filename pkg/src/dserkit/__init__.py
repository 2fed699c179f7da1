"""Exact arithmetic for elementary orthogonal transformations on Q + H(P)."""

__version__ = "0.1.0"
