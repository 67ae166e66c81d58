"""Isolation schemes for Hamiltonian cycles, independent sets and matchings."""

__version__ = "0.1.0"
