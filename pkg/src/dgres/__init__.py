"""Exact resolutions and homological dimensions for DG-modules over
finite-dimensional connective DG-algebras, over a prime field GF(p)."""

__version__ = "0.1.0"
