"""Exact computations around parabolic multiplicative affine Springer fibers."""

__version__ = "0.1.0"
