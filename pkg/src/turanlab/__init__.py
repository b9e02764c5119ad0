"""Executable machinery for generalized Turán problems in random graphs."""

__version__ = "0.1.0"
