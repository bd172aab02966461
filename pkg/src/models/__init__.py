"""
Models package: the lattice, receiver placements and minor polynomials.
"""

from src.models.lattice import EdgeVar, Lattice, Side, Triangle, Vertex, get_lattice
from src.models.placement import Placement
from src.models.polynomial import MinorPolynomial

__all__ = [
    "EdgeVar",
    "Lattice",
    "Side",
    "Triangle",
    "Vertex",
    "get_lattice",
    "Placement",
    "MinorPolynomial",
]
