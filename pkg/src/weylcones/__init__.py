"""Exact calculus for chamber cones, parabolic families, nilpotent orbit
induction and prehomogeneous subquotients in split classical groups of rank
at most three."""

__version__ = "0.1.0"
