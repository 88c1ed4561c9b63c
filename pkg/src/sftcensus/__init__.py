"""Conjugacy invariants and strong shift equivalence search for shifts
of finite type given by small nonnegative integer matrices."""

__version__ = "0.1.0"
