"""Exact constructions and verification for fraction Hopf algebras."""

__version__ = "0.1.0"
