"""Exact rational computer algebra for Drinfeld associators, braid-group
holonomy and solutions of the Kashiwara-Vergne equations.

Everything is computed over exact rationals in degree-truncated graded
objects: noncommutative power series, free Lie algebras on Lyndon bases,
the infinitesimal-braid Lie algebras, tangential derivations and
automorphisms, and cyclic-word trace spaces.  The associator solver
produces rational solutions of the duality, hexagon and pentagon
relations degree by degree, and the surrounding modules verify, at any
chosen truncation, the explicit map from associators to Kashiwara-Vergne
solutions together with its torsor, cocycle, braid-group and centralizer
identities.
"""

__version__ = "0.1.0"
