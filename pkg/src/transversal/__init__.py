"""Transversal complexity of geometric graphs: sampling, ply and segment queries."""

__version__ = "0.1.0"
