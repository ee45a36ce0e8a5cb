"""Exact-arithmetic toolkit for Calogero-Moser data on affine curves.

Builds and verifies matrix data for Calogero-Moser spaces over the rationals,
emits explicit generators of the associated fractional ideals of rings of
differential operators, and runs the homological and group-action checks
that certify the construction.
"""

__version__ = "0.1.0"
