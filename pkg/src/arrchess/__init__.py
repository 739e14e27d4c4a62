"""Asymmetric repetition rule toolkit."""

__version__ = "0.1.0"
