"""Exact desk-scale toolkit for the hardness of determinant maximization and exponentiated DPPs."""

__version__ = "0.1.0"
