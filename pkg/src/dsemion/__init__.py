"""Exact finite-size simulation of the double semion string-net model."""

__version__ = "0.1.0"
