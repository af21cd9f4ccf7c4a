"""Knot groups, their SU(2) representations and the gates they generate."""

__version__ = "0.1.0"
