"""Exact computation with derivations and E-derivations of algebras over Q."""

__version__ = "0.1.0"
