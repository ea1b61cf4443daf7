"""Converse KAM detector for two-wave and Q-flow models."""

__version__ = "0.1.0"
