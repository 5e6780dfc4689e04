"""Exact section counts of toric Fano varieties compared with projective space."""

__version__ = "0.1.0"
