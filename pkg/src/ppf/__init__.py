"""Quadratic pseudo-planar functions over GF(2^n) and their derived objects."""

__version__ = "0.1.0"
