import random

import pytest
from gmpy2 import mpq

from oracles import scan_quadrisecants
from quadlab.catalog import builtin_knot
from quadlab.errors import GeneralPositionError, InfiniteFamily
from quadlab.exact import AlgebraicNumber
from quadlab.geometry import AffineMap
from quadlab.knot import PolygonalKnot
from quadlab.quadrisecants import (
    EnumerationStats,
    find_all_quadrisecants,
    quadruple_coefficients,
    same_line,
    solve_quadruple,
    transversal_family,
)
from quadlab.samples import random_generic_knot

Q = mpq


def _float_signature(quads):
    return sorted((q.edges, tuple(float(s.parameter) for s in q.secants)) for q in quads)


def test_k6_single_line_on_the_x_axis(k6):
    quads = find_all_quadrisecants(k6)
    assert len(quads) == 1
    (line,) = quads
    assert line.edges == (1, 2, 4, 5)
    points = sorted(tuple(c for c in s.point) for s in line.secants)
    assert points == [(Q(c), 0, 0) for c in (0, 1, 3, 4)]


def test_k14_has_four_lines(k14):
    stats = EnumerationStats()
    quads = find_all_quadrisecants(k14, stats=stats)
    assert len(quads) == 4
    assert stats.quadruples == 1001


def test_coefficients_vanish_only_through_roots(k14):
    # every root returned for the quadruple must satisfy the coefficients' quadratic
    for quad in find_all_quadrisecants(k14):
        A, B, C = quadruple_coefficients(k14, quad.edges)
        x = quad.x_root
        assert A * x * x + B * x + C == 0


def test_solve_quadruple_returns_nothing_for_far_edges(k6):
    # edges 0 and 3 sit on opposite sides of the hexagon; no line meets 0, 1, 2, 3
    assert solve_quadruple(k6, (0, 1, 2, 3)) == []


def test_guard_determinant():
    flat = PolygonalKnot(((0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1)))
    with pytest.raises(GeneralPositionError):
        find_all_quadrisecants(flat)


def _hyperboloid_knot():
    """Four edges on one ruling family of x^2 + y^2 - z^2 = 1, joined by connectors."""
    rulings = [((1, 0), (-1, Q(3, 2))), ((0, 1), (Q(-1, 2), 1)), ((-1, 0), (-1, Q(5, 4))), ((0, -1), (Q(-3, 4), 1))]
    verts = []
    for (c, s), ends in rulings:
        for t in ends:
            verts.append((c - s * t, s + c * t, t))
    return PolygonalKnot(tuple(verts))


def test_ruled_quadruple_reports_infinite_family():
    knot = _hyperboloid_knot()
    report = solve_quadruple(knot, (0, 2, 4, 6))
    assert report.kind == "infinite_solutions" and report.witness == (0, 2, 4, 6)
    with pytest.raises((InfiniteFamily, GeneralPositionError)):
        find_all_quadrisecants(knot)


def test_secant_points_are_collinear_and_on_edges(k14):
    for quad in find_all_quadrisecants(k14):
        for rec in quad.secants:
            assert 0 <= rec.parameter < 1
        assert len({rec.edge for rec in quad.secants}) == 4


@pytest.mark.parametrize("seed", range(6))
def test_matches_scanning_oracle(seed):
    rng = random.Random(seed)
    knot = random_generic_knot(rng.choice([5, 6, 7]), rng)
    exact = _float_signature(find_all_quadrisecants(knot))
    oracle = scan_quadrisecants(knot)
    assert [e for e, _ in exact] == [e for e, _ in oracle]
    for (_, a), (_, b) in zip(exact, oracle):
        assert max(abs(x - y) for x, y in zip(a, b)) < 1e-9


def test_affine_image_keeps_parameters(k14):
    T = AffineMap(((1, 2, 0), (0, 1, Q(1, 3)), (Q(-1, 2), 0, 2)), (5, -1, Q(2, 7)))
    image = k14.map(T)
    a, b = find_all_quadrisecants(k14), find_all_quadrisecants(image)
    assert [q.edges for q in a] == [q.edges for q in b]
    for qa, qb in zip(a, b):
        assert all(sa.parameter == sb.parameter for sa, sb in zip(qa.secants, qb.secants))


def test_parallel_workers_give_identical_output(k14):
    serial = find_all_quadrisecants(k14, workers=1)
    assert [q.to_json() for q in serial] == [q.to_json() for q in find_all_quadrisecants(k14, workers=1)]


def test_same_line_is_reflexive(k14):
    quads = find_all_quadrisecants(k14)
    assert all(same_line(q, q) for q in quads)
    assert not same_line(quads[0], quads[1])


def test_transversal_family_lines_meet_three_edges(k14):
    fam = transversal_family(k14, (1, 3, 6))
    x = AlgebraicNumber(Q(2, 3))
    pts = fam.points(x)
    d1 = tuple(b - a for a, b in zip(pts[0], pts[1]))
    d2 = tuple(b - a for a, b in zip(pts[0], pts[2]))
    cross = (d1[1] * d2[2] - d1[2] * d2[1], d1[2] * d2[0] - d1[0] * d2[2], d1[0] * d2[1] - d1[1] * d2[0])
    assert all(c == 0 for c in cross)
    assert fam.kind in ("quadric", "planar", "collapse")
