from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import det3_fraction
from quadlab.exact import (
    AlgebraicNumber,
    MultiQuadratic,
    as_rational,
    certified_sign,
    det3,
    enclose,
    format_rational,
    solve_quadratic_exact,
)

rationals = st.fractions(max_denominator=50).map(lambda f: mpq(f.numerator, f.denominator))
small = st.integers(-40, 40)
vectors = st.tuples(rationals, rationals, rationals)


def test_as_rational_accepts_literals():
    assert as_rational("3/4") == mpq(3, 4)
    assert as_rational("-1.1") == mpq(-11, 10)
    assert as_rational(Fraction(2, 6)) == mpq(1, 3)
    with pytest.raises(ValueError):
        as_rational("abc")


def test_format_rational_reduces():
    assert format_rational(mpq(6, 4)) == "3/2"
    assert format_rational(mpq(-4, 2)) == "-2"


def test_det3_identity_and_repeated_column():
    e1, e2, e3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
    assert det3(e1, e2, e3) == 1
    u = (mpq(1, 3), 2, -5)
    assert det3(u, u, e3) == 0


def test_det3_on_k14_edge_vectors(k14):
    V = k14.vertices
    vs = [tuple(b - a for a, b in zip(V[i], V[i + 1])) for i in range(3)]
    expected = det3_fraction(*vs)
    assert expected != 0
    assert det3(*vs) == mpq(expected.numerator, expected.denominator)


@settings(max_examples=300, deadline=None)
@given(vectors, vectors, vectors, vectors, rationals)
def test_det3_is_multilinear_and_alternating(u, v, w, x, c):
    lhs = det3(tuple(a + c * b for a, b in zip(u, x)), v, w)
    assert lhs == det3(u, v, w) + c * det3(x, v, w)
    assert det3(v, u, w) == -det3(u, v, w)


def test_solve_quadratic_cases():
    r = solve_quadratic_exact(1, 0, -4)
    assert r.kind == "two" and r.roots == (AlgebraicNumber(-2), AlgebraicNumber(2))
    assert solve_quadratic_exact(0, 0, 0).identically_zero
    assert solve_quadratic_exact(1, -2, 2).kind == "none"
    assert solve_quadratic_exact(0, 2, -1).roots == (AlgebraicNumber(mpq(1, 2)),)
    assert solve_quadratic_exact(1, -2, 1).kind == "double"


@settings(max_examples=300, deadline=None)
@given(rationals, rationals, rationals)
def test_roots_satisfy_their_quadratic(A, B, C):
    res = solve_quadratic_exact(A, B, C)
    if res.identically_zero:
        assert A == B == C == 0
        return
    for x in res.roots:
        assert A * x * x + B * x + C == 0


def test_algebraic_normalization():
    assert AlgebraicNumber(1, 2, 4).is_rational()
    assert AlgebraicNumber(1, 2, 4) == AlgebraicNumber(5)
    x = AlgebraicNumber(0, 1, 8)
    assert (x.b, x.d) == (2, 2)
    assert AlgebraicNumber(0, 1, mpq(1, 2)) == AlgebraicNumber(0, mpq(1, 2), 2)


def test_algebraic_field_operations():
    r2 = AlgebraicNumber.sqrt(2)
    assert r2 * r2 == 2
    x = AlgebraicNumber(3, 5, 7)
    assert x * x.inverse() == 1
    assert (x - x.conjugate()) == AlgebraicNumber(0, 10, 7)


def test_certified_sign_examples():
    assert certified_sign(AlgebraicNumber(-1, 1, 2)) == 1
    assert certified_sign(AlgebraicNumber(-3, 2, 2)) == -1
    r2, r3, r6 = (AlgebraicNumber.sqrt(d) for d in (2, 3, 6))
    s = r2 + r3
    assert isinstance(s, MultiQuadratic)
    assert certified_sign(s * s - (5 + 2 * r6)) == 0
    assert certified_sign(r2 + r3 - AlgebraicNumber(mpq(3146, 1000))) == 1
    assert certified_sign(r2 + r3 - AlgebraicNumber(mpq(3147, 1000))) == -1


@settings(max_examples=200, deadline=None)
@given(small, small, st.integers(2, 30), small, small, st.integers(2, 30))
def test_certified_sign_matches_high_precision(a1, b1, d1, a2, b2, d2):
    import mpmath

    x = AlgebraicNumber(a1, b1, d1) * AlgebraicNumber(a2, b2, d2) - AlgebraicNumber(a2, b1, d1 + d2)
    with mpmath.workdps(80):
        ref = (a1 + b1 * mpmath.sqrt(d1)) * (a2 + b2 * mpmath.sqrt(d2)) - (a2 + b1 * mpmath.sqrt(d1 + d2))
        if abs(ref) > mpmath.mpf(10) ** -60:
            assert certified_sign(x) == (1 if ref > 0 else -1)


def test_enclosure_contains_value():
    x = AlgebraicNumber(1, 3, 5)
    box = enclose(x, 64)
    assert box.lo <= box.hi
    assert box.hi - box.lo < mpq(1, 2**60)
    assert mpq(77082, 10000) < box.lo and box.hi < mpq(77083, 10000)  # 1 + 3*sqrt(5) = 7.70820...
