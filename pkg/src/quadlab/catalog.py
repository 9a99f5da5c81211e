"""Built-in knots: the hexagonal unknot K6, the primary knot K0 and K14.

K14 is produced from K0 by the shrink/extend formulas with the published
delta/epsilon choices; the published coordinate table is kept in the tests
as a cross-check.
"""

from __future__ import annotations

from gmpy2 import mpq

from .errors import InputError
from .knot import PolygonalKnot

Q = mpq


def _pt(x, y, z):
    return (Q(x), Q(y), Q(z))


def _add(p, q):
    return tuple(a + b for a, b in zip(p, q))


def _sub(p, q):
    return tuple(a - b for a, b in zip(p, q))


def _mul(p, s):
    return tuple(a * s for a in p)


K6_TRIANGLE_STAGE = (
    _pt(0, 0, 0),
    _pt(1, 0, 0),
    _pt(2, 0, 1),
    _pt(3, 0, 0),
    _pt(4, 0, 0),
    _pt(2, 3, 0),
)

K6 = (
    _pt(Q(-1, 5), Q(-3, 10), 0),
    _pt(Q(4, 5), 0, Q(-1, 5)),
    _pt(2, 0, 1),
    _pt(Q(13, 4), 0, Q(-1, 4)),
    _pt(Q(17, 4), Q(-3, 8), 0),
    _pt(2, 3, 0),
)

K0 = (
    _pt(0, 0, 0),
    _pt(0, 0, -4),
    _pt(8, -2, -4),
    _pt(6, -3, -6),
    _pt(0, 0, -6),
    _pt(0, 0, -8),
    _pt(10, -1, -8),
    _pt(10, -1, 1),
    _pt(6, 1, 0),
    _pt(8, 0, -1),
    _pt(6, -1, 0),
    _pt(12, -2, -3),
    _pt(12, 0, 0),
    _pt(6, 2, 0),
)

# Auxiliary point of K0 shared by the lines through {V3,V4,V13} and {V9,V10,V12}.
K0_V15 = _pt(10, -1, -2)

K14_PARAMETERS = {
    "delta3": Q(1, 5),
    "delta4": Q(1, 4),
    "delta6": Q(1, 2),
    "eps1": Q(1, 10),
    "eps2": Q(1, 10),
    "eps3": Q(1, 5),
    "eps4": Q(1, 10),
    "eps5": Q(1, 5),
    "eps6": Q(1, 10),
    "eps9": Q(1, 10),
    "eps10": Q(1, 20),
    "eps11": Q(1, 20),
    "eps12": Q(1, 10),
    "eps13": Q(1, 10),
}


def extend_primary(primary, params=None) -> tuple:
    """Shrink V3V4, lower V6, then extend seven edges of a 14-vertex primary knot.

    ``primary`` is indexed 1..14 in the comments below (V1 = primary[0]).
    Returns the 14 vertices W1..W14.
    """
    p = dict(K14_PARAMETERS)
    if params:
        p.update(params)
    V = {i + 1: tuple(Q(c) for c in v) for i, v in enumerate(primary)}
    U3 = _sub(V[3], _mul(_sub(V[3], V[4]), p["delta3"]))
    U4 = _add(V[4], _mul(_sub(V[3], V[4]), p["delta4"]))
    U6 = _sub(V[6], (Q(0), Q(0), p["delta6"]))
    W = dict(V)
    W[6] = _add(U6, _mul(_sub(U6, V[7]), p["eps6"]))
    W[4] = _add(U4, _mul(_sub(U4, V[5]), p["eps4"]))
    W[5] = _sub(V[5], _mul(_sub(U4, V[5]), p["eps5"]))
    W[2] = _add(V[2], _mul(_sub(V[2], U3), p["eps2"]))
    W[3] = _sub(U3, _mul(_sub(V[2], U3), p["eps3"]))
    W[1] = _add(V[1], _mul(_sub(V[1], V[14]), p["eps1"]))
    W[9] = _add(V[9], _mul(_sub(V[9], V[8]), p["eps9"]))
    W[10] = _add(V[10], _mul(_sub(V[10], V[11]), p["eps10"]))
    W[11] = _sub(V[11], _mul(_sub(V[10], V[11]), p["eps11"]))
    W[12] = _add(V[12], _mul(_sub(V[12], V[13]), p["eps12"]))
    W[13] = _sub(V[13], _mul(_sub(V[12], V[13]), p["eps13"]))
    return tuple(W[i] for i in range(1, 15))


def k0_remark_variant() -> tuple:
    """K0 with V10 = (8, 0, -1.1) and V12 = (12, -2, -3.3)."""
    verts = list(K0)
    verts[9] = _pt(8, 0, Q(-11, 10))
    verts[11] = _pt(12, -2, Q(-33, 10))
    return tuple(verts)


PAPER_NAMES = ("k6", "k14", "k0", "k6_triangle_stage", "k14_remark")
BUILTIN_NAMES = PAPER_NAMES + ("trefoil", "figure_eight", "quadrilateral", "pentagon")


def builtin_knot(name: str) -> PolygonalKnot:
    key = name.lower().replace("-", "_")
    if key == "k6":
        return PolygonalKnot(K6, "k6")
    if key == "k6_triangle_stage":
        return PolygonalKnot(K6_TRIANGLE_STAGE, "k6_triangle_stage")
    if key == "k0":
        return PolygonalKnot(K0, "k0")
    if key == "k14":
        return PolygonalKnot(extend_primary(K0), "k14")
    if key == "k14_remark":
        return PolygonalKnot(extend_primary(k0_remark_variant()), "k14_remark")
    if key in BUILTIN_NAMES:
        from .samples import sample_knot

        return sample_knot(key)
    raise InputError(f"unknown builtin knot {name!r}; valid names: {', '.join(BUILTIN_NAMES)}")
