"""Traversal times of wave packets across rectangular wells and barriers."""

__version__ = "0.1.0"
