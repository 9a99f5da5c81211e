"""Acceptance suite: one test per criterion (criteria 7 and 8 are split into parts).

conftest.py prints a PASS/FAIL line per criterion at the end of the run.
"""

import random
import time

import pytest
from gmpy2 import mpq

from oracles import scan_quadrisecants
from quadlab.approximation import approximate, collect_secant_points, find_self_intersections
from quadlab.catalog import builtin_knot, k0_remark_variant
from quadlab.classify import JONES_LEFT_TREFOIL, JONES_RIGHT_TREFOIL, LaurentPolynomial, classify
from quadlab.connectsum import build_K_diamond, build_K_star, connect_knots, subdivide_for_trefoil_sum
from quadlab.errors import ProjectionError
from quadlab.exact import certified_sign, det3, solve_quadratic_exact
from quadlab.geometry import AffineMap, cross, sub
from quadlab.knot import check_general_position
from quadlab.pipeline import run_pipeline
from quadlab.quadrisecants import find_all_quadrisecants
from quadlab.samples import random_generic_knot

Q = mpq


def _float_signature(quads):
    return sorted((q.edges, tuple(float(s.parameter) for s in q.secants)) for q in quads)


def _is_zero_vector(v):
    return all(certified_sign(c) == 0 for c in v)


def _lines_disjoint(a, b):
    offset = sub(b.anchor, a.anchor)
    if not _is_zero_vector(cross(a.direction, b.direction)):
        return certified_sign(det3(offset, a.direction, b.direction)) != 0
    return not _is_zero_vector(cross(offset, a.direction))


def test_criterion_1_k6_reproduction(k6):
    start = time.perf_counter()
    quads = find_all_quadrisecants(k6)
    assert len(quads) == 1
    points = sorted(s.point for s in quads[0].secants)
    assert points == [(Q(c), Q(0), Q(0)) for c in (0, 1, 3, 4)]
    report = find_self_intersections(approximate(k6, quads))
    assert not report.is_embedded
    assert "overlap" in report.kinds()
    assert time.perf_counter() - start < 1.0


def test_criterion_2_k14_reproduction(k14):
    start = time.perf_counter()
    assert check_general_position(k14).passed
    quads = find_all_quadrisecants(k14)
    assert len(quads) == 4
    hat = approximate(k14, quads)
    assert find_self_intersections(hat).is_embedded
    hat_class = classify(hat, check_embedded=False)
    assert hat_class.jones in (JONES_LEFT_TREFOIL, JONES_RIGHT_TREFOIL)
    print(f"approximation of K14: {hat_class.verdict}, V = {hat_class.jones}")
    assert classify(k14).jones == LaurentPolynomial.one()
    assert time.perf_counter() - start < 10.0


def test_criterion_3_remark_variant():
    base = k0_remark_variant()
    assert base[9] == (8, 0, Q(-11, 10)) and base[11] == (12, -2, Q(-33, 10))
    knot = builtin_knot("k14_remark")
    quads = find_all_quadrisecants(knot)
    assert len(quads) == 4
    for i in range(4):
        for j in range(i + 1, 4):
            assert _lines_disjoint(quads[i], quads[j]), (i, j)
    on_edge = {s.point for q in quads for s in q.secants if s.edge == 6}
    assert (Q(10), Q(-1), Q(-2)) in on_edge
    assert (Q(10), Q(-1), Q(-11, 5)) in on_edge
    assert len(collect_secant_points(knot, quads).points) == 16


def test_criterion_4_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(2024)
    for trial in range(50):
        knot = random_generic_knot(rng.choice([5, 6, 7, 8]), rng)
        exact = _float_signature(find_all_quadrisecants(knot))
        oracle = scan_quadrisecants(knot)
        assert [e for e, _ in exact] == [e for e, _ in oracle], trial
        for (_, a), (_, b) in zip(exact, oracle):
            assert max(abs(x - y) for x, y in zip(a, b)) < 1e-9, trial
    assert time.perf_counter() - start < 120


def _edge_count_suite():
    knots = [builtin_knot(name) for name in ("quadrilateral", "pentagon", "trefoil", "figure_eight", "k6")]
    rng = random.Random(5)
    knots += [random_generic_knot(n, rng) for n in (4, 5, 6, 7, 8)]
    return knots


def test_criterion_5_edge_counts():
    for knot in _edge_count_suite():
        n = knot.n
        assert build_K_star(knot, verify_outcome=False).knot.n == n + 6, knot.name
        assert build_K_diamond(knot, verify_outcome=False).knot.n == n + 14, knot.name
        assert subdivide_for_trefoil_sum(knot).knot.n == 5 * ((n + 1) // 2), knot.name


CONNECT_PAIRS = [
    ("quadrilateral", "k6", 0),
    ("trefoil", "trefoil", 1),
    ("trefoil", "figure_eight", 2),
    ("pentagon", "trefoil", 3),
    ("figure_eight", "trefoil", 4),
]


def test_criterion_6_connected_sum_multiplies_jones():
    for host_name, guest_name, seed in CONNECT_PAIRS:
        host, guest = builtin_knot(host_name), builtin_knot(guest_name)
        result = connect_knots(host, guest, 0, seed=seed)
        assert result.knot.n == host.n + guest.n
        expected = classify(host).jones * classify(guest).jones
        assert classify(result.knot).jones == expected, (host_name, guest_name)


def test_criterion_7_k_star_fails_embedding(quad4):
    start = time.perf_counter()
    result = build_K_star(quad4)
    assert run_pipeline(result.knot).verdict == "FAILS-embedding"
    assert time.perf_counter() - start < 300


def test_criterion_7_k_diamond_fails_type_with_left_trefoil(quad4):
    start = time.perf_counter()
    result = build_K_diamond(quad4)
    report = run_pipeline(result.knot)
    assert report.verdict == "FAILS-type"
    verdict = report.stages["classification"]["approximation"]["verdict"]
    print(f"approximation of K-diamond: {verdict}")
    assert verdict == "trefoil_left"
    assert time.perf_counter() - start < 300


def _random_affine(rng):
    while True:
        rows = tuple(tuple(Q(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(3)) for _ in range(3))
        T = AffineMap(rows, tuple(Q(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(3)))
        if T.determinant() != 0:
            return T


def test_criterion_8_affine_invariance():
    rng = random.Random(8)
    knots = [builtin_knot(name) for name in ("k6", "k14", "trefoil", "figure_eight", "pentagon")]
    for knot in knots:
        base = find_all_quadrisecants(knot)
        for _ in range(20):
            image = find_all_quadrisecants(knot.map(_random_affine(rng)))
            assert [q.edges for q in image] == [q.edges for q in base], knot.name
            for qa, qb in zip(base, image):
                assert all(sa.parameter == sb.parameter for sa, sb in zip(qa.secants, qb.secants))


def _rational(rng):
    return Q(rng.randint(-10**6, 10**6), rng.randint(1, 10**4))


def test_criterion_8_determinant_multilinearity():
    rng = random.Random(81)
    for _ in range(10_000):
        u, v, w, x = (tuple(_rational(rng) for _ in range(3)) for _ in range(4))
        a, b = _rational(rng), _rational(rng)
        k = rng.randrange(3)
        mixed = tuple(a * p + b * q for p, q in zip(u, x))
        cols = [v, w]
        cols.insert(k, mixed)
        left = det3(*cols)
        cols[k] = u
        du = det3(*cols)
        cols[k] = x
        dx = det3(*cols)
        assert left == a * du + b * dx


def test_criterion_8_quadratic_back_substitution():
    rng = random.Random(82)
    for _ in range(10_000):
        A, B, C = _rational(rng), _rational(rng), _rational(rng)
        if rng.random() < 0.1:
            A = Q(0)
        res = solve_quadratic_exact(A, B, C)
        for x in res.roots:
            assert A * x * x + B * x + C == 0


@pytest.mark.parametrize("name", ["trefoil", "figure_eight", "k14"])
def test_criterion_8_projection_independence(name):
    knot = builtin_knot(name)
    reference = classify(knot).jones
    rng = random.Random(83)
    checked = 0
    while checked < 20:
        d = tuple(Q(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(3))
        try:
            result = classify(knot, direction=d)
        except ProjectionError:
            continue
        assert result.jones == reference, d
        checked += 1
