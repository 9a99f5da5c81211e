from gmpy2 import mpq

from quadlab.approximation import (
    approximate,
    collect_secant_points,
    compare_quadrisecant_sets,
    find_self_intersections,
    polygon_to_json,
    polygon_to_obj,
)
from quadlab.catalog import builtin_knot
from quadlab.exact import AlgebraicNumber
from quadlab.knot import PolygonalKnot
from quadlab.quadrisecants import find_all_quadrisecants


def test_k6_approximation_is_a_doubled_segment(k6):
    hat = approximate(k6)
    assert hat.n == 4
    assert sorted(v[0] for v in hat.vertices) == [0, 1, 3, 4]
    report = find_self_intersections(hat)
    assert not report.is_embedded
    assert report.kinds() == {"overlap"}


def test_k14_points_merge_where_lines_meet(k14):
    quads = find_all_quadrisecants(k14)
    seq = collect_secant_points(k14, quads)
    assert seq.raw_count == 16
    assert seq.merged == 1
    hat = approximate(k14, quads)
    assert hat.n == 15
    assert find_self_intersections(hat).is_embedded


def test_remark_variant_has_sixteen_vertices():
    knot = builtin_knot("k14_remark")
    hat = approximate(knot)
    assert hat.n == 16
    assert find_self_intersections(hat).is_embedded


def test_points_are_sorted_along_the_knot(k14):
    seq = collect_secant_points(k14, find_all_quadrisecants(k14))
    keys = [(p.edge, float(p.parameter)) for p in seq.points]
    assert keys == sorted(keys)


def test_no_quadrisecants_means_identity(quad4):
    hat = approximate(quad4)
    assert hat.is_identity and hat.vertices == quad4.vertices
    assert compare_quadrisecant_sets(quad4, hat).status == "equal"


def test_k14_comparison_is_not_comparable(k14):
    result = compare_quadrisecant_sets(k14, approximate(k14))
    assert result.status == "not-comparable"
    assert "coplanar" in result.reason


def test_k6_comparison_reports_embedding(k6):
    result = compare_quadrisecant_sets(k6, approximate(k6))
    assert result.status == "not-comparable"
    assert result.reason == "approximation is not embedded"


def test_degenerate_polygons():
    class Poly:
        def __init__(self, verts):
            self.vertices = verts

    p = (mpq(0), mpq(0), mpq(0))
    assert find_self_intersections(Poly((p,))).kinds() == {"degenerate"}
    q = (mpq(1), mpq(0), mpq(0))
    assert not find_self_intersections(Poly((p, q, q))).is_embedded


def test_export_formats(k6):
    obj = polygon_to_obj(k6, digits=6)
    lines = obj.splitlines()
    assert sum(1 for line in lines if line.startswith("v ")) == 6
    assert lines[-1] == "l 1 2 3 4 5 6 1"
    data = polygon_to_json(k6)
    assert data["vertices"][0] == ["-1/5", "-3/10", "0"]
    assert "approximate" not in data


def test_irrational_vertices_export_as_decimals():
    r2 = AlgebraicNumber.sqrt(2)
    poly = PolygonalKnot(((0, 0, 0), (1, 0, 0), (0, 1, 0)))

    class Hat:
        vertices = tuple(tuple(AlgebraicNumber(c) for c in v) for v in poly.vertices[:2]) + (
            (r2, AlgebraicNumber(0), AlgebraicNumber(1)),
        )

    data = polygon_to_json(Hat(), digits=20)
    assert data["approximate"] is True
    assert data["vertices"][2][0].startswith("1.4142135623730950488")
