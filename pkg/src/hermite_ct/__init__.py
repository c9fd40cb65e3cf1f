"""Generalized Hermite reduction and reduction-based creative telescoping."""

__version__ = "0.1.0"
