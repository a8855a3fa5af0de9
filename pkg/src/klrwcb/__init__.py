"""Exact combinatorics of flavoured KLRW diagrams and abelian Coulomb
branch algebras for quiver gauge theories."""

__version__ = "0.1.0"
