"""Realising lattices for diagonal Nichols algebras, computed exactly."""

__version__ = "0.1.0"
