"""Exact enumeration of the quadrisecants of a polygonal knot.

For edges i < j < k < l a candidate line passes through
V_i + p v_i, V_j + q v_j, V_k + r v_k, V_l + s v_l. Collinearity of the
first three points with ratio x, solved by Cramer's rule, gives

    p = a1/(1-x) + b1,   q = c1 (x-1)/x + d1,   r = e1 x + f1

and the same with ratio y against edge l (coefficients a2 .. f2). Equating
the two expressions for p and for q and eliminating y leaves one quadratic
A x^2 + B x + C = 0 whose coefficients are computed in
:func:`quadruple_coefficients`. Each root x not in {0, 1} is turned back
into p, q, r, s and kept when all four lie in [0, 1).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations

from gmpy2 import mpq

from .errors import GeneralPositionError, InfiniteFamily, QuintisecantDetected
from .exact import (
    AlgebraicNumber,
    det3,
    format_rational,
    sign,
    solve_quadratic_exact,
)
from .geometry import add, cross, is_zero_vector, scale, sub


@dataclass(frozen=True)
class SecantRecord:
    """Point V_edge + parameter * v_edge of the knot, with parameter in [0, 1)."""

    edge: int
    parameter: AlgebraicNumber
    point: tuple

    def to_json(self) -> dict:
        return {
            "edge": self.edge,
            "parameter": self.parameter.to_json(),
            "point": [c.to_json() for c in self.point],
        }


@dataclass(frozen=True)
class Quadrisecant:
    secants: tuple
    anchor: tuple
    direction: tuple
    x_root: AlgebraicNumber
    radicand: int

    @property
    def edges(self) -> tuple:
        return tuple(s.edge for s in self.secants)

    def to_json(self) -> dict:
        return {
            "edges": list(self.edges),
            "radicand": format_rational(mpq(self.radicand)),
            "x_root": self.x_root.to_json(),
            "secants": [s.to_json() for s in self.secants],
        }


@dataclass(frozen=True)
class DegeneracyReport:
    """A quadruple (or triple) whose transversal equation degenerates."""

    kind: str
    witness: tuple


@dataclass(frozen=True)
class _System:
    """Cramer coefficients of the x-family (edges i, j, k) and y-family (i, j, l)."""

    a1: mpq
    b1: mpq
    c1: mpq
    d1: mpq
    e1: mpq
    f1: mpq
    a2: mpq
    b2: mpq
    c2: mpq
    d2: mpq
    e2: mpq
    f2: mpq


def _family_coefficients(V, v, i, j, k):
    """(a, b, c, d, e, f) of p = a/(1-x)+b, q = c(x-1)/x+d, r = e x+f for edges i, j, k."""
    Vi, Vj, Vk = V[i], V[j], V[k]
    vi, vj, vk = v[i], v[j], v[k]
    D = det3(vi, vj, vk)
    if D == 0:
        raise GeneralPositionError(f"edge vectors {i}, {j}, {k} are linearly dependent")
    return (
        det3(sub(Vk, Vj), vj, vk) / D,
        det3(sub(Vj, Vi), vj, vk) / D,
        det3(vi, sub(Vi, Vk), vk) / D,
        det3(vi, sub(Vk, Vj), vk) / D,
        det3(vi, vj, sub(Vj, Vi)) / D,
        det3(vi, vj, sub(Vi, Vk)) / D,
    )


def _system(knot, quad) -> _System:
    i, j, k, l = quad
    V = knot.vertices
    n = len(V)
    v = {h: sub(V[(h + 1) % n], V[h]) for h in quad}
    Vd = {h: V[h] for h in quad}
    if det3(v[i], sub(V[i], V[k]), v[k]) == 0 or det3(sub(V[l], V[j]), v[j], v[l]) == 0:
        raise GeneralPositionError(f"guard determinant vanishes for quadruple {quad}")
    x_coef = _family_coefficients(Vd, v, i, j, k)
    y_coef = _family_coefficients(Vd, v, i, j, l)
    return _System(*x_coef, *y_coef)


def _abc(sy: _System) -> tuple[mpq, mpq, mpq]:
    m = sy.a2 - sy.b1 + sy.b2
    e = sy.d1 - sy.d2
    A = sy.c2 * sy.a2 - (sy.c1 + e) * m
    B = (sy.c1 + e) * (m - sy.a1) + sy.c1 * m - sy.c2 * sy.a2
    C = sy.c1 * (sy.a1 - m)
    return A, B, C


def _integral(A: mpq, B: mpq, C: mpq) -> tuple[mpq, mpq, mpq]:
    """Scale (A, B, C) to coprime integers with the same roots."""
    from math import gcd, lcm

    den = lcm(int(A.denominator), int(B.denominator), int(C.denominator))
    nums = [int(A * den), int(B * den), int(C * den)]
    g = gcd(*nums)
    if g == 0:
        return mpq(0), mpq(0), mpq(0)
    return tuple(mpq(t // g) for t in nums)


def quadruple_coefficients(knot, quad) -> tuple[mpq, mpq, mpq]:
    """Rational (A, B, C) of the transversal quadratic for edges i < j < k < l.

    The roots x not in {0, 1} are the collinearity ratios of every line
    meeting the four edge lines with secant points off the edges' terminal
    vertices. Raises GeneralPositionError when a guard determinant vanishes.
    """
    return _integral(*_abc(_system(knot, quad)))


def _in_unit(t: AlgebraicNumber) -> bool:
    return sign(t) >= 0 and sign(t - 1) < 0


def _point(knot, edge: int, t: AlgebraicNumber):
    V = knot.vertices
    n = len(V)
    base = V[edge]
    vec = sub(V[(edge + 1) % n], base)
    return tuple(t * vec[c] + base[c] for c in range(3))


def _candidate(knot, quad, sy: _System, x: AlgebraicNumber, radicand: int):
    if sign(x) == 0 or sign(x - 1) == 0:
        return None
    one = AlgebraicNumber(1)
    p = sy.a1 * (one - x).inverse() + sy.b1
    q = sy.c1 * (x - 1) * x.inverse() + sy.d1
    r = sy.e1 * x + sy.f1
    # y from the p-equality; a2 != 0 by the guard determinant.
    g = (p - sy.b2) / sy.a2
    if sign(g) == 0 or sign(g - 1) == 0:
        return None
    y = one - g.inverse()
    q_y = sy.c2 * (y - 1) * y.inverse() + sy.d2
    if sign(q - q_y) != 0:
        return None
    s = sy.e2 * y + sy.f2
    params = (p, q, r, s)
    if not all(_in_unit(t) for t in params):
        return None
    secants = tuple(
        SecantRecord(e, t, _point(knot, e, t)) for e, t in zip(quad, params)
    )
    pts = [rec.point for rec in secants]
    direction = sub(pts[1], pts[0])
    for other in pts[2:]:
        if not is_zero_vector(cross(direction, sub(other, pts[0]))):
            raise AssertionError(f"recovered points for {quad} are not collinear")
    return Quadrisecant(secants, pts[0], direction, x, radicand)


def solve_quadruple(knot, quad):
    """Quadrisecants through edges ``quad`` (0, 1 or 2), or a DegeneracyReport.

    Raises GeneralPositionError if the quadruple's guard determinants vanish.
    """
    sy = _system(knot, quad)
    A, B, C = _integral(*_abc(sy))
    roots = solve_quadratic_exact(A, B, C)
    if roots.identically_zero:
        return DegeneracyReport("infinite_solutions", tuple(quad))
    radicand = int(roots.roots[0].d) if roots.roots else 0
    out = []
    for x in roots.roots:
        cand = _candidate(knot, quad, sy, x, radicand)
        if cand is not None:
            out.append(cand)
    return out


def same_line(a: Quadrisecant, b: Quadrisecant) -> bool:
    if not is_zero_vector(cross(a.direction, b.direction)):
        return False
    return is_zero_vector(cross(a.direction, sub(b.anchor, a.anchor)))


def _canonical_cmp(a: Quadrisecant, b: Quadrisecant) -> int:
    for sa, sb in zip(a.secants, b.secants):
        if sa.edge != sb.edge:
            return -1 if sa.edge < sb.edge else 1
        c = sign(sa.parameter - sb.parameter)
        if c:
            return c
    return 0


def _solve_chunk(args):
    knot, quads = args
    out = []
    for quad in quads:
        out.append((quad, solve_quadruple(knot, quad)))
    return out


def _chunks(seq, size):
    for start in range(0, len(seq), size):
        yield seq[start : start + size]


@dataclass
class EnumerationStats:
    quadruples: int = 0
    degenerate: list = field(default_factory=list)


def find_all_quadrisecants(knot, workers: int | None = 1, stats: EnumerationStats | None = None):
    """Every quadrisecant of a generic knot, in canonical order.

    Raises InfiniteFamily when some quadruple's quadratic vanishes
    identically and QuintisecantDetected when one line meets five or more
    edges. ``workers`` > 1 fans the quadruples out to processes; the merge
    is sequential, so the result does not depend on scheduling.
    """
    n = knot.n
    quads = list(combinations(range(n), 4))
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and len(quads) > 2000:
        size = max(1, len(quads) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = []
            for part in pool.map(_solve_chunk, [(knot, c) for c in _chunks(quads, size)]):
                results.extend(part)
    else:
        results = _solve_chunk((knot, quads))
    if stats is not None:
        stats.quadruples = len(quads)
    lines: list[Quadrisecant] = []
    for quad, res in results:
        if isinstance(res, DegeneracyReport):
            if stats is not None:
                stats.degenerate.append(res)
            raise InfiniteFamily(f"edges {quad} admit infinitely many transversals")
        for cand in res:
            for prev in lines:
                if same_line(prev, cand):
                    edges = sorted(set(prev.edges) | set(cand.edges))
                    raise QuintisecantDetected(f"one line meets edges {edges}")
            lines.append(cand)
    lines.sort(key=cmp_to_key(_canonical_cmp))
    return lines


@dataclass(frozen=True)
class TransversalFamily:
    """Lines meeting the lines of edges i < j < k, parameterized by x.

    ``kind`` is "collapse" (both key determinants vanish: no admissible
    transversal), "planar" (one vanishes: the family sweeps part of a
    plane) or "quadric".
    """

    edges: tuple
    kind: str
    coefficients: tuple
    knot: object = field(repr=False, compare=False)

    def params(self, x):
        a, b, c, d, e, f = self.coefficients
        one = 1
        return (a / (one - x) + b, c * (x - one) / x + d, e * x + f)

    def points(self, x):
        p, q, r = self.params(x)
        V = self.knot.vertices
        n = len(V)
        out = []
        for edge, t in zip(self.edges, (p, q, r)):
            base = V[edge]
            vec = sub(V[(edge + 1) % n], base)
            out.append(add(base, scale(vec, t)))
        return out

    def line(self, x):
        pts = self.points(x)
        return pts[0], sub(pts[1], pts[0])


def transversal_family(knot, triple) -> TransversalFamily:
    i, j, k = triple
    V = knot.vertices
    n = len(V)
    v = {h: sub(V[(h + 1) % n], V[h]) for h in triple}
    coef = _family_coefficients({h: V[h] for h in triple}, v, i, j, k)
    zero_a = det3(sub(V[k], V[j]), v[j], v[k]) == 0
    zero_e = det3(v[i], v[j], sub(V[j], V[i])) == 0
    if zero_a and zero_e:
        kind = "collapse"
    elif zero_a or zero_e:
        kind = "planar"
    else:
        kind = "quadric"
    return TransversalFamily(tuple(triple), kind, coef, knot)


def quadrisecants_to_json(quads) -> list:
    return [q.to_json() for q in quads]
