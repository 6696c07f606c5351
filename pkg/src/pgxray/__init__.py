"""Exact X-ray transform, doubly ruled quadrics and admissible line complexes on PG(3, q)."""

from .gf import Field, FieldElement, field_new, field_of_order
from .pg3 import Geometry, Relation, build_geometry

__all__ = ["Field", "FieldElement", "Geometry", "Relation", "build_geometry", "field_new", "field_of_order"]
__version__ = "0.1.0"
