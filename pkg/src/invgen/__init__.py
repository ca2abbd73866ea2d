"""Invariable generation, free subgroups of SL(2), and automorphisms of regular trees."""

__version__ = "0.1.0"
