"""Colored Jones polynomials of torus knots, twisted Whitehead links and
Whitehead doubles at roots of unity, with volume-conjecture diagnostics."""

__version__ = "0.1.0"
