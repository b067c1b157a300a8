"""Exact computations linking type A quiver varieties, matrix slices and lattices."""

__version__ = "0.1.0"
