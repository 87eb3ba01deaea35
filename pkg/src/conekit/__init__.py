"""Exact decision procedures for fine monoids, their homomorphisms,
rational cones and cone complexes, and the combinatorics of equivariant
vector bundles on toric charts."""

__version__ = "0.1.0"
