"""Exact computations for the cluster symplectic double."""

__version__ = "0.1.0"
