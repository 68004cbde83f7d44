"""Pfaffian systems, Cauchy characteristics and the affine classification of
first-order ODEs y' = f(x, y)."""

__version__ = "0.1.0"
