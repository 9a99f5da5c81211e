"""Polygonal knots: data model, general position, simplicity and file I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

from .errors import KnotFormatError
from .exact import as_rational, det3, format_rational, sign
from .geometry import points_equal, polyline_contacts, sub


@dataclass(frozen=True)
class PolygonalKnot:
    """Closed polygon V_0 ... V_{n-1} with rational vertices.

    Edge i runs from V_i to V_{i+1 mod n}. Indices are 0-based in the
    Python API; file formats and reports use the same 0-based labels.
    """

    vertices: tuple
    name: str = ""

    def __post_init__(self):
        verts = tuple(tuple(as_rational(c) for c in v) for v in self.vertices)
        if any(len(v) != 3 for v in verts):
            raise KnotFormatError("every vertex needs three coordinates")
        if len(verts) < 3:
            raise KnotFormatError(f"a polygonal knot needs at least 3 vertices, got {len(verts)}")
        for i in range(len(verts)):
            if verts[i] == verts[(i + 1) % len(verts)]:
                raise KnotFormatError(f"vertices {i} and {(i + 1) % len(verts)} coincide")
        object.__setattr__(self, "vertices", verts)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int):
        return self.vertices[i % self.n]

    def edge(self, i: int):
        return self.vertex(i), self.vertex(i + 1)

    def edge_vector(self, i: int):
        return sub(self.vertex(i + 1), self.vertex(i))

    def edge_vectors(self) -> list:
        return [self.edge_vector(i) for i in range(self.n)]

    def relabel(self, start: int) -> PolygonalKnot:
        """Cyclic relabeling so that old vertex ``start`` becomes V_0."""
        s = start % self.n
        return PolygonalKnot(self.vertices[s:] + self.vertices[:s], self.name)

    def reversed(self) -> PolygonalKnot:
        return PolygonalKnot(tuple(reversed(self.vertices)), self.name)

    def map(self, fn, name: str | None = None) -> PolygonalKnot:
        return PolygonalKnot(tuple(fn(v) for v in self.vertices), self.name if name is None else name)

    def with_name(self, name: str) -> PolygonalKnot:
        return PolygonalKnot(self.vertices, name)


@dataclass
class GeneralPositionReport:
    coplanar_violations: list = field(default_factory=list)
    dependent_violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.coplanar_violations and not self.dependent_violations

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "coplanar_violations": [list(t) for t in self.coplanar_violations],
            "dependent_violations": [list(t) for t in self.dependent_violations],
        }


def coplanarity_form(vi, vj, vk, vl):
    """Det(Vj,Vk,Vl) - Det(Vi,Vk,Vl) + Det(Vi,Vj,Vl) - Det(Vi,Vj,Vk).

    Vanishes exactly when the four points are coplanar.
    """
    return det3(vj, vk, vl) - det3(vi, vk, vl) + det3(vi, vj, vl) - det3(vi, vj, vk)


def check_general_position(knot, exhaustive: bool = True) -> GeneralPositionReport:
    """Exact check that no four vertices are coplanar and any three edge
    vectors are independent. With ``exhaustive=False`` stop at the first
    violation of each kind.

    Works for any vertex number type, so it also accepts approximation
    polygons with algebraic coordinates.
    """
    verts = list(knot.vertices)
    n = len(verts)
    edges = [sub(verts[(i + 1) % n], verts[i]) for i in range(n)]
    report = GeneralPositionReport()
    for quad in combinations(range(n), 4):
        if sign(coplanarity_form(*(verts[t] for t in quad))) == 0:
            report.coplanar_violations.append(quad)
            if not exhaustive:
                break
    for tri in combinations(range(n), 3):
        if sign(det3(*(edges[t] for t in tri))) == 0:
            report.dependent_violations.append(tri)
            if not exhaustive:
                break
    return report


@dataclass(frozen=True)
class SimplicityResult:
    simple: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.simple


def is_simple(knot) -> SimplicityResult:
    """True iff non-adjacent edges are disjoint and adjacent edges meet only
    at their shared vertex. The witness is the first offending edge pair
    with its contact."""
    verts = knot.vertices if hasattr(knot, "vertices") else knot
    n = len(verts)
    for i in range(n):
        if points_equal(verts[i], verts[(i + 1) % n]):
            return SimplicityResult(False, (i, i, None))
    found = polyline_contacts(list(verts), closed=True, first_only=True)
    if found:
        return SimplicityResult(False, found[0])
    return SimplicityResult(True)


def knot_to_json(knot: PolygonalKnot) -> dict:
    return {
        "name": knot.name,
        "vertices": [[format_rational(c) for c in v] for v in knot.vertices],
    }


def knot_from_json(obj) -> PolygonalKnot:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise KnotFormatError('knot JSON must be an object with a "vertices" list')
    raw = obj["vertices"]
    if not isinstance(raw, list):
        raise KnotFormatError('"vertices" must be a list')
    verts = []
    for k, v in enumerate(raw):
        if not isinstance(v, list) or len(v) != 3:
            raise KnotFormatError(f"vertex {k} must be a list of three coordinates")
        try:
            verts.append(tuple(as_rational(str(c)) for c in v))
        except (TypeError, ValueError) as exc:
            raise KnotFormatError(f"vertex {k}: {exc}") from exc
    return PolygonalKnot(tuple(verts), str(obj.get("name", "")))


def load_knot(path) -> PolygonalKnot:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise KnotFormatError(f"{path}: invalid JSON ({exc})") from exc
    return knot_from_json(obj)


def save_knot(knot: PolygonalKnot, path) -> None:
    Path(path).write_text(json.dumps(knot_to_json(knot), indent=2) + "\n")
