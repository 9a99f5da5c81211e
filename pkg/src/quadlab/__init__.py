"""Exact quadrisecant enumeration, quadrisecant approximations and the
connected-sum constructions built on them."""

from .knot import PolygonalKnot, load_knot, save_knot
from .catalog import builtin_knot
from .quadrisecants import find_all_quadrisecants
from .approximation import approximate, find_self_intersections
from .classify import classify

__all__ = [
    "PolygonalKnot",
    "approximate",
    "builtin_knot",
    "classify",
    "find_all_quadrisecants",
    "find_self_intersections",
    "load_knot",
    "save_knot",
]

__version__ = "0.1.0"
