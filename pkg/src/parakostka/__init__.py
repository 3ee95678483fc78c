"""Exact arithmetic for parabolic Kostant and Kostka polynomials."""

__version__ = "0.1.0"
