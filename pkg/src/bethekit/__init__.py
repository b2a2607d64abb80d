"""Exact symbolic and multiprecision tools for quiver Bethe systems."""

__version__ = "0.1.0"
