"""Exact and numerical checks for algebraic Painlevé VI solutions and their Picard-Fuchs equations."""

__version__ = "0.1.0"
