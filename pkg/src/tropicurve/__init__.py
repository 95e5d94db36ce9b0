"""Exact computation with tropical plane curves."""

__version__ = "0.1.0"
