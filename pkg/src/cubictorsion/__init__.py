"""Exact torsion computations for elliptic curves over cubic number fields."""

__version__ = "0.1.0"
