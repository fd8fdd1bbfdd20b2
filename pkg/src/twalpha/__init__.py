"""Desk-scale machinery for bounded tree-independence number."""

__version__ = "0.1.0"
