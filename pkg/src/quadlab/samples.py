"""Small fixed knots and seeded random generic polygons for tests and demos."""

from __future__ import annotations

import random

from gmpy2 import mpq

from .knot import PolygonalKnot, check_general_position, is_simple


def _knot(rows, name):
    return PolygonalKnot(tuple(tuple(mpq(c) for c in row) for row in rows), name)


def trefoil() -> PolygonalKnot:
    """Six-edge left-handed trefoil in general position."""
    rows = [
        ("1/2", -1, "-1/2"), ("5/2", "3/2", "1/2"), (-1, 0, "-1/2"),
        ("1/2", -3, "1/2"), ("1/2", 1, "-1/2"), ("-5/2", 1, "1/2"),
    ]
    return _knot(rows, "trefoil")


def figure_eight() -> PolygonalKnot:
    """Nine-edge figure-eight knot in general position."""
    rows = [
        (3, 0, 0), (-1, 2, "1/2"), ("-1/2", -1, "-1/2"), ("3/2", 0, 1), ("-3/2", "5/2", -1),
        ("-3/2", "-5/2", 1), ("3/2", 0, -1), ("-1/2", 1, "1/2"), (-1, -2, "-1/2"),
    ]
    return _knot(rows, "figure_eight")


def quadrilateral() -> PolygonalKnot:
    """Generic skew 4-gon (an unknot)."""
    return _knot([(0, 0, 0), (3, "1/2", "1/3"), ("5/2", 3, "-1/2"), ("-1/3", "5/2", "1/4")], "quadrilateral")


def pentagon() -> PolygonalKnot:
    """Generic 5-gon (an unknot)."""
    rows = [(0, 0, 0), (4, "1/3", "1/2"), ("9/2", "7/2", "-1/3"), ("3/2", 5, "1/5"), ("-1", "5/2", "-1/2")]
    return _knot(rows, "pentagon")


SAMPLE_NAMES = ("trefoil", "figure_eight", "quadrilateral", "pentagon")


def sample_knot(name: str) -> PolygonalKnot:
    return {"trefoil": trefoil, "figure_eight": figure_eight,
            "quadrilateral": quadrilateral, "pentagon": pentagon}[name]()


def random_generic_knot(n: int, rng: random.Random, bound: int = 8, denominator: int = 4,
                        max_attempts: int = 1000) -> PolygonalKnot:
    """Random embedded n-gon with rational vertices passing the general-position checks."""
    for _ in range(max_attempts):
        verts = tuple(
            tuple(mpq(rng.randint(-bound * denominator, bound * denominator), denominator) for _ in range(3))
            for _ in range(n)
        )
        try:
            knot = PolygonalKnot(verts, f"random{n}")
        except ValueError:
            continue
        if is_simple(knot).simple and check_general_position(knot, exhaustive=False).passed:
            return knot
    raise RuntimeError(f"no generic {n}-gon found in {max_attempts} attempts")
