"""Dihedral-like automorphic loops: construction, automorphisms, isomorphism."""

__version__ = "0.1.0"
