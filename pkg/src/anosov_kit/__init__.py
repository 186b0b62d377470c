"""Exact and certified computations for the mapping class group of the
Dehn-filled figure-eight knot complement carrying a surgered Anosov flow."""

__version__ = "0.1.0"
