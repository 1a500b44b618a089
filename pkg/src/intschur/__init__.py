"""Integral Schur algebras, quasi-hereditary gluing and Grassmannian tilting algebras."""

__version__ = "0.1.0"
