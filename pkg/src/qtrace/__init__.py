"""Exact SL(n) quantum trace polynomials on triangulated punctured surfaces."""

__version__ = "0.1.0"
