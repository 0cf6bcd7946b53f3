"""Toeplitz determinants with an emerging Fisher-Hartwig singularity."""

__version__ = "0.1.0"
