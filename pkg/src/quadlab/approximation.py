"""The quadrisecant approximation of a knot and its self-intersections.

Every quadrisecant meets the knot in four points. Taking all of them in
order along the knot and joining consecutive ones by straight segments
gives the approximation polygon. With no quadrisecants it is the knot
itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key

from .exact import AlgebraicNumber, is_rational_value, sign, to_mpf
from .geometry import polyline_contacts, points_equal
from .knot import check_general_position
from .quadrisecants import find_all_quadrisecants, same_line


@dataclass(frozen=True)
class SecantPoint:
    """A point of the knot hit by one or more quadrisecants."""

    edge: int
    parameter: AlgebraicNumber
    point: tuple
    sources: tuple

    def to_json(self) -> dict:
        return {
            "edge": self.edge,
            "parameter": self.parameter.to_json(),
            "point": [c.to_json() for c in self.point],
            "sources": list(self.sources),
        }


@dataclass(frozen=True)
class SecantPointSequence:
    points: tuple
    raw_count: int

    def __len__(self):
        return len(self.points)

    @property
    def merged(self) -> int:
        return self.raw_count - len(self.points)


def _along_knot(a, b) -> int:
    if a.edge != b.edge:
        return -1 if a.edge < b.edge else 1
    return sign(a.parameter - b.parameter)


def collect_secant_points(knot, quads) -> SecantPointSequence:
    """All secant points of ``quads`` sorted along the knot, coincident ones merged.

    ``sources`` of each point lists the positions in ``quads`` of the lines
    through it.
    """
    records = []
    for index, quad in enumerate(quads):
        for rec in quad.secants:
            records.append((rec, index))
    records.sort(key=cmp_to_key(lambda u, v: _along_knot(u[0], v[0])))
    merged: list[SecantPoint] = []
    for rec, index in records:
        if merged and _along_knot(merged[-1], rec) == 0:
            last = merged[-1]
            merged[-1] = SecantPoint(last.edge, last.parameter, last.point, last.sources + (index,))
        else:
            merged.append(SecantPoint(rec.edge, rec.parameter, rec.point, (index,)))
    return SecantPointSequence(tuple(merged), len(records))


@dataclass(frozen=True)
class ApproximationPolygon:
    """Closed polyline through the secant points.

    ``provenance[i]`` is the SecantPoint behind vertex i, or None when the
    knot had no quadrisecants and the polygon is the knot itself.
    """

    vertices: tuple
    provenance: tuple
    degenerate: bool = False

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def is_identity(self) -> bool:
        return all(p is None for p in self.provenance)

    @property
    def is_rational(self) -> bool:
        return all(is_rational_value(c) for v in self.vertices for c in v)

    def to_json(self, digits: int = 15) -> dict:
        return polygon_to_json(self, digits=digits)


def build_approximation(knot, secants: SecantPointSequence) -> ApproximationPolygon:
    if len(secants) == 0:
        return ApproximationPolygon(tuple(knot.vertices), (None,) * knot.n)
    verts = tuple(p.point for p in secants.points)
    return ApproximationPolygon(verts, secants.points, degenerate=len(verts) < 3)


def approximate(knot, quads=None) -> ApproximationPolygon:
    """Shortcut: enumerate quadrisecants if needed and build the polygon."""
    if quads is None:
        quads = find_all_quadrisecants(knot)
    return build_approximation(knot, collect_secant_points(knot, quads))


@dataclass(frozen=True)
class Crossing:
    segments: tuple
    kind: str
    locus: tuple

    def to_json(self, digits: int = 15) -> dict:
        return {
            "segments": list(self.segments),
            "kind": self.kind,
            "locus": [[_decimal(c, digits) for c in p] for p in self.locus],
        }


@dataclass(frozen=True)
class SelfIntersectionReport:
    crossings: tuple = field(default_factory=tuple)

    @property
    def is_embedded(self) -> bool:
        return not self.crossings

    def kinds(self) -> set:
        return {c.kind for c in self.crossings}

    def to_json(self, digits: int = 15) -> dict:
        return {
            "is_embedded": self.is_embedded,
            "crossings": [c.to_json(digits) for c in self.crossings],
        }


def find_self_intersections(polygon) -> SelfIntersectionReport:
    """Every illegal contact between segments of a closed polygon, exactly.

    Segment ``i`` runs from vertex i to vertex i+1. A polygon with fewer
    than three vertices reports its doubled-back segments as overlaps.
    """
    verts = list(polygon.vertices)
    if len(verts) == 1:
        return SelfIntersectionReport((Crossing((0, 0), "degenerate", (verts[0],)),))
    if any(points_equal(verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts))):
        bad = next(i for i in range(len(verts)) if points_equal(verts[i], verts[(i + 1) % len(verts)]))
        return SelfIntersectionReport((Crossing((bad, bad), "degenerate", (verts[bad],)),))
    contacts = polyline_contacts(verts, closed=True)
    return SelfIntersectionReport(tuple(Crossing((i, j), c.kind, c.locus) for i, j, c in contacts))


@dataclass(frozen=True)
class QuadrisecantComparison:
    """Outcome of comparing the quadrisecants of K and of its approximation.

    ``status`` is "equal", "differs" or "not-comparable".
    """

    status: str
    reason: str = ""
    only_in_knot: tuple = ()
    only_in_approximation: tuple = ()

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "reason": self.reason,
            "only_in_knot": [list(q.edges) for q in self.only_in_knot],
            "only_in_approximation": [list(q.edges) for q in self.only_in_approximation],
        }


def _unmatched(left, right):
    return tuple(a for a in left if not any(same_line(a, b) for b in right))


def compare_quadrisecant_sets(knot, polygon, knot_quads=None, embedding=None) -> QuadrisecantComparison:
    """Compare the quadrisecant lines of ``knot`` and of its approximation.

    The approximation must be embedded, in general position and rational
    for its own enumeration to be meaningful; otherwise the result is
    "not-comparable" with the reason. The four collinear vertices of any
    secant line already break general position, so only the identity case
    is ever comparable in practice.
    """
    from .knot import PolygonalKnot

    if knot_quads is None:
        knot_quads = find_all_quadrisecants(knot)
    if polygon.is_identity:
        return QuadrisecantComparison("equal", "approximation equals the knot")
    if embedding is None:
        embedding = find_self_intersections(polygon)
    if not embedding.is_embedded:
        return QuadrisecantComparison("not-comparable", "approximation is not embedded")
    if polygon.n < 4:
        return QuadrisecantComparison("not-comparable", "approximation has fewer than four vertices")
    report = check_general_position(polygon, exhaustive=False)
    if not report.passed:
        if report.coplanar_violations:
            why = f"approximation vertices {list(report.coplanar_violations[0])} are coplanar"
        else:
            why = f"approximation edges {list(report.dependent_violations[0])} are linearly dependent"
        return QuadrisecantComparison("not-comparable", why)
    if not polygon.is_rational:
        return QuadrisecantComparison("not-comparable", "approximation has irrational vertices")
    hat_quads = find_all_quadrisecants(PolygonalKnot(polygon.vertices, "approximation"))
    left = _unmatched(knot_quads, hat_quads)
    right = _unmatched(hat_quads, knot_quads)
    if left or right:
        return QuadrisecantComparison("differs", "line sets differ", left, right)
    return QuadrisecantComparison("equal")


# export -----------------------------------------------------------------------


def _decimal(x, digits: int) -> str:
    import mpmath

    bits = int(digits * 3.33) + 16
    return mpmath.nstr(to_mpf(x, bits), digits, strip_zeros=False, min_fixed=-6, max_fixed=12)


def polygon_to_json(polygon, digits: int = 15) -> dict:
    """Knot-file JSON for a polygon; irrational coordinates become decimals."""
    from .exact import format_rational

    exact = all(is_rational_value(c) for v in polygon.vertices for c in v)
    if exact:
        rows = [[format_rational(_as_q(c)) for c in v] for v in polygon.vertices]
    else:
        rows = [[_decimal(c, digits) for c in v] for v in polygon.vertices]
    out = {"name": getattr(polygon, "name", "approximation") or "approximation", "vertices": rows}
    if not exact:
        out["approximate"] = True
    return out


def _as_q(c):
    if isinstance(c, AlgebraicNumber):
        return c.a
    from .exact import MultiQuadratic

    if isinstance(c, MultiQuadratic):
        return c.simplify().a
    return c


def polygon_to_obj(polygon, digits: int = 15) -> str:
    """Wavefront OBJ text: one ``v`` line per vertex and a closed ``l`` polyline."""
    lines = ["# closed polyline"]
    for v in polygon.vertices:
        lines.append("v " + " ".join(_decimal(c, digits) for c in v))
    n = len(polygon.vertices)
    lines.append("l " + " ".join(str(i + 1) for i in range(n)) + " 1")
    return "\n".join(lines) + "\n"
