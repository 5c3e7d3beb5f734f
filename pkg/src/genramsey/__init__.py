"""Generalized Ramsey numbers via finite-field indicator polynomials."""

__version__ = "0.1.0"
