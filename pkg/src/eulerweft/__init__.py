"""Pauli-product circuits, (hyper)graphs, and exact signed Eulerian enumerators."""

__version__ = "0.1.0"
