"""Knot type at desk scale: regular projection, PD code, Kauffman bracket, Jones.

Conventions. A projection direction d is viewed from +d, so the strand
with larger ``X . d`` passes over. A crossing is positive when
(over tangent x under tangent) . d > 0. PD tuples list the four arc labels
counterclockwise starting from the incoming under-arc. The bracket uses
<X[a,b,c,d]> = A <P[a,b] P[c,d]> + A^-1 <P[a,d] P[b,c]> with loop value
-A^2 - A^-2, and the Jones polynomial is (-A^3)^(-writhe) <D> at A = t^(-1/4).
Under these conventions the left-handed trefoil has writhe -3 and Jones
polynomial -t^-4 + t^-3 + t^-1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cmp_to_key

from gmpy2 import mpq

from .errors import CrossingCapExceeded, NotEmbeddedError, ProjectionError
from .exact import as_rational, format_rational, sign
from .geometry import cross, dot, polyline_contacts, sub

MAX_CROSSINGS = 24
MAX_DIRECTION_ATTEMPTS = 10_000


class LaurentPolynomial:
    """Sparse Laurent polynomial in one variable with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        for exp, c in (terms or {}).items():
            c = as_rational(c)
            if c != 0:
                self.terms[int(exp)] = c

    @classmethod
    def monomial(cls, coeff=1, exp: int = 0) -> LaurentPolynomial:
        return cls({exp: coeff})

    @classmethod
    def one(cls) -> LaurentPolynomial:
        return cls({0: 1})

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            return other
        return LaurentPolynomial({0: other})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            ((e, c),) = self.terms.items()
            return LaurentPolynomial({e * k: mpq(1) / c ** (-k)})
        out = LaurentPolynomial.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial({0: other})
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def substitute_power(self, k: int) -> LaurentPolynomial:
        """p(x) -> p(x^k); k = -1 mirrors."""
        return LaurentPolynomial({e * k: c for e, c in self.terms.items()})

    def mirror(self) -> LaurentPolynomial:
        return self.substitute_power(-1)

    def items(self):
        return sorted(self.terms.items())

    def to_json(self) -> list:
        return [[format_rational(c), e] for e, c in self.items()]

    @classmethod
    def from_pairs(cls, pairs) -> LaurentPolynomial:
        return cls({int(e): as_rational(c) for c, e in pairs})

    def format(self, var: str = "t") -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items():
            cs = format_rational(c)
            if e == 0:
                parts.append(cs)
            elif c == 1:
                parts.append(f"{var}^{e}")
            elif c == -1:
                parts.append(f"-{var}^{e}")
            else:
                parts.append(f"{cs}*{var}^{e}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"LaurentPolynomial({self.format()})"


def jones_from_pairs(pairs) -> LaurentPolynomial:
    return LaurentPolynomial({e: c for c, e in pairs})


JONES_UNKNOT = LaurentPolynomial.one()
JONES_LEFT_TREFOIL = LaurentPolynomial({-4: -1, -3: 1, -1: 1})
JONES_RIGHT_TREFOIL = JONES_LEFT_TREFOIL.mirror()
JONES_FIGURE_EIGHT = LaurentPolynomial({-2: 1, -1: -1, 0: 1, 1: -1, 2: 1})


# projection -------------------------------------------------------------------


def projection_basis(direction):
    """Rational (a, b) with (a, b, direction) a right-handed orthogonal frame."""
    d = tuple(as_rational(c) for c in direction)
    if all(c == 0 for c in d):
        raise ProjectionError("projection direction is zero")
    axis = min(range(3), key=lambda i: (abs(d[i]), i))
    e = tuple(mpq(1) if i == axis else mpq(0) for i in range(3))
    a = cross(d, e)
    b = cross(d, a)
    return a, b, d


@dataclass(frozen=True)
class DiagramCrossing:
    over_edge: int
    under_edge: int
    sign: int
    pd: tuple


@dataclass(frozen=True)
class KnotDiagram:
    """Crossing data of a regular projection.

    ``gauss_code`` lists the crossings met along the polyline, +k for an
    over-pass and -k for an under-pass of crossing k (1-based).
    """

    direction: tuple
    crossings: tuple
    gauss_code: tuple

    @property
    def pd_code(self) -> tuple:
        return tuple(c.pd for c in self.crossings)

    @property
    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def pd_text(self) -> str:
        return "PD[" + ", ".join("X[" + ",".join(map(str, c.pd)) + "]" for c in self.crossings) + "]"

    def to_json(self) -> dict:
        return {
            "direction": [format_rational(c) for c in self.direction],
            "pd_code": [list(c.pd) for c in self.crossings],
            "signs": [c.sign for c in self.crossings],
            "writhe": self.writhe,
        }


class _Irregular(Exception):
    pass


def _ratio_cmp(n1, d1, n2, d2) -> int:
    """Exact comparison of n1/d1 and n2/d2 (denominators nonzero)."""
    return sign(n1 * d2 - n2 * d1) * sign(d1) * sign(d2)


def _project(verts, direction):
    a, b, d = projection_basis(direction)
    pts = [(dot(v, a), dot(v, b)) for v in verts]
    depth = [dot(v, d) for v in verts]
    return pts, depth, d


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _between(p, q, r) -> bool:
    """r lies on the closed segment pq, given the three are collinear."""
    for k in range(2):
        lo, hi = (p[k], q[k]) if sign(q[k] - p[k]) >= 0 else (q[k], p[k])
        if sign(r[k] - lo) < 0 or sign(hi - r[k]) < 0:
            return False
    return True


def _crossings(verts, direction):
    """Raw crossing list of the projection, raising _Irregular if not regular."""
    n = len(verts)
    pts, depth, d = _project(verts, direction)
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        if sign(q[0] - p[0]) == 0 and sign(q[1] - p[1]) == 0:
            raise _Irregular(f"edge {i} is parallel to the direction")
    for i in range(n):
        p, q = pts[i], pts[(i + 1) % n]
        for k in range(n):
            if k == i or k == (i + 1) % n:
                continue
            r = pts[k]
            if sign(_orient(p, q, r)) == 0 and _between(p, q, r):
                raise _Irregular(f"vertex {k} projects onto edge {i}")
    found = []
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            c, e = pts[j], pts[(j + 1) % n]
            o1, o2 = _orient(c, e, a), _orient(c, e, b)
            o3, o4 = _orient(a, b, c), _orient(a, b, e)
            if sign(o1) * sign(o2) < 0 and sign(o3) * sign(o4) < 0:
                # parameter on edge i is o1/(o1-o2), on edge j is o3/(o3-o4)
                found.append((i, j, (o1, o1 - o2), (o3, o3 - o4)))
    per_edge: dict = {}
    for idx, (i, j, ti, tj) in enumerate(found):
        per_edge.setdefault(i, []).append((ti, idx))
        per_edge.setdefault(j, []).append((tj, idx))
    for edge, items in per_edge.items():
        items.sort(key=cmp_to_key(lambda u, v: _ratio_cmp(u[0][0], u[0][1], v[0][0], v[0][1])))
        for (t1, _), (t2, _) in zip(items, items[1:]):
            if _ratio_cmp(t1[0], t1[1], t2[0], t2[1]) == 0:
                raise _Irregular(f"triple point on edge {edge}")
    out = []
    for i, j, (ni, di), (nj, dj) in found:
        hi_num = ni * depth[(i + 1) % n] + (di - ni) * depth[i]
        hj_num = nj * depth[(j + 1) % n] + (dj - nj) * depth[j]
        s = _ratio_cmp(hi_num, di, hj_num, dj)
        if s == 0:
            raise NotEmbeddedError(f"edges {i} and {j} intersect")
        over, under = (i, j) if s > 0 else (j, i)
        vo = sub(verts[(over + 1) % n], verts[over])
        vu = sub(verts[(under + 1) % n], verts[under])
        out.append((i, j, over, under, sign(dot(cross(vo, vu), d))))
    return out, per_edge


def _build_diagram(verts, direction) -> KnotDiagram:
    raw, per_edge = _crossings(verts, direction)
    n = len(verts)
    events = []  # (crossing index, is_over)
    for edge in range(n):
        for _, idx in per_edge.get(edge, []):
            over = raw[idx][2]
            events.append((idx, over == edge))
    m = len(events)
    if m == 0:
        return KnotDiagram(tuple(direction), (), ())
    # arc k+1 runs from event k to event k+1; event k is entered by arc k (arc m for k = 0)
    incoming: dict = {}
    outgoing: dict = {}
    for k, (idx, is_over) in enumerate(events):
        arc_in = k if k > 0 else m
        incoming[(idx, is_over)] = arc_in
        outgoing[(idx, is_over)] = k + 1
    order = []
    for idx, _ in events:
        if idx not in order:
            order.append(idx)
    number = {idx: pos + 1 for pos, idx in enumerate(order)}
    crossings = []
    for idx in order:
        _, _, over, under, sgn = raw[idx]
        a, c = incoming[(idx, False)], outgoing[(idx, False)]
        oi, oo = incoming[(idx, True)], outgoing[(idx, True)]
        pd = (a, oo, c, oi) if sgn > 0 else (a, oi, c, oo)
        crossings.append(DiagramCrossing(over, under, sgn, pd))
    gauss = tuple(number[idx] if is_over else -number[idx] for idx, is_over in events)
    return KnotDiagram(tuple(as_rational(c) for c in direction), tuple(crossings), gauss)


def _vertices(polyline):
    return list(polyline.vertices if hasattr(polyline, "vertices") else polyline)


def random_direction(rng: random.Random, bound: int = 64) -> tuple:
    while True:
        d = tuple(mpq(rng.randint(-bound, bound)) for _ in range(3))
        if any(d):
            return d


def is_regular_direction(polyline, direction) -> bool:
    try:
        _crossings(_vertices(polyline), direction)
    except (_Irregular, ProjectionError):
        return False
    return True


def project_to_diagram(polyline, direction=None, seed: int = 0, check_embedded: bool = True) -> KnotDiagram:
    """Diagram of a closed polyline along ``direction`` or a sampled regular one.

    Regularity is exact: no edge parallel to the direction, no vertex over
    a non-incident edge, no triple points and distinct depths at every
    crossing. A given direction that is not regular raises ProjectionError.
    """
    verts = _vertices(polyline)
    if check_embedded and polyline_contacts(verts, closed=True, first_only=True):
        raise NotEmbeddedError("polyline is not embedded")
    if direction is not None:
        try:
            return _build_diagram(verts, direction)
        except _Irregular as exc:
            raise ProjectionError(f"direction {tuple(map(str, direction))} is not regular: {exc}") from exc
    rng = random.Random(seed)
    for _ in range(MAX_DIRECTION_ATTEMPTS):
        d = random_direction(rng)
        try:
            return _build_diagram(verts, d)
        except _Irregular:
            continue
    raise ProjectionError(f"no regular direction in {MAX_DIRECTION_ATTEMPTS} attempts")


# bracket ----------------------------------------------------------------------


def _greedy_order(pd):
    remaining = list(range(len(pd)))
    seen: set = set()
    order = []
    while remaining:
        best = max(remaining, key=lambda k: (sum(1 for x in pd[k] if x in seen), -k))
        remaining.remove(best)
        order.append(best)
        seen.update(pd[best])
    return order


def _join(match: dict, closed: bool, arcs):
    """Add smoothing arcs to a partial matching of open labels.

    Returns the new matching, the closed-flag and how many extra loops
    (beyond the first ever closed) were formed.
    """
    match = dict(match)
    extra = 0
    for x, y in arcs:
        if x == y:
            loops = 1
        elif x in match and match[x] == y:
            del match[x]
            del match[y]
            loops = 1
        else:
            ex = match.pop(x, None)
            ey = match.pop(y, None)
            if ex is not None:
                del match[ex]
            else:
                ex = x
            if ey is not None:
                del match[ey]
            else:
                ey = y
            match[ex] = ey
            match[ey] = ex
            loops = 0
        if loops:
            if closed:
                extra += 1
            closed = True
    return match, closed, extra


def _poly_add(acc: dict, poly: dict, shift: int, loops: int, loop_poly: dict):
    for _ in range(loops):
        nxt: dict = {}
        for e1, c1 in poly.items():
            for e2, c2 in loop_poly.items():
                nxt[e1 + e2] = nxt.get(e1 + e2, 0) + c1 * c2
        poly = nxt
    for e, c in poly.items():
        v = acc.get(e + shift, 0) + c
        if v:
            acc[e + shift] = v
        else:
            acc.pop(e + shift, None)


def bracket_from_pd(pd, max_crossings: int = MAX_CROSSINGS) -> LaurentPolynomial:
    """Kauffman bracket of a PD code, variable A, normalized so the unknot is 1.

    Crossings are contracted one at a time, keeping a sum over the partial
    matchings of still-open arc labels.
    """
    pd = [tuple(x) for x in pd]
    if len(pd) > max_crossings:
        raise CrossingCapExceeded(f"{len(pd)} crossings exceed the cap of {max_crossings}")
    if not pd:
        return LaurentPolynomial.one()
    loop_poly = {2: -1, -2: -1}
    states: dict = {((), False): {0: 1}}
    for k in _greedy_order(pd):
        a, b, c, d = pd[k]
        smoothings = ((1, ((a, b), (c, d))), (-1, ((a, d), (b, c))))
        nxt: dict = {}
        for (items, closed), poly in states.items():
            match = dict(items)
            for shift, arcs in smoothings:
                m2, cl2, extra = _join(match, closed, arcs)
                key = (tuple(sorted(m2.items())), cl2)
                acc = nxt.setdefault(key, {})
                _poly_add(acc, poly, shift, extra, loop_poly)
        states = {k2: v for k2, v in nxt.items() if v}
    total: dict = {}
    for (items, closed), poly in states.items():
        if items:
            raise ValueError("PD code does not close up: some label appears once")
        _poly_add(total, poly, 0, 0, loop_poly)
    return LaurentPolynomial(total)


def kauffman_bracket(diagram: KnotDiagram, max_crossings: int = MAX_CROSSINGS) -> LaurentPolynomial:
    return bracket_from_pd(diagram.pd_code, max_crossings)


def jones_from_bracket(bracket: LaurentPolynomial, writhe: int) -> LaurentPolynomial:
    """(-A^3)^(-w) <D> rewritten in t = A^-4."""
    f = bracket * LaurentPolynomial.monomial(-1 if writhe % 2 else 1, -3 * writhe)
    out = {}
    for e, c in f.terms.items():
        if e % 4:
            raise ValueError(f"bracket exponent {e} is not a multiple of 4 after normalization")
        out[-e // 4] = c
    return LaurentPolynomial(out)


def jones_from_pd(pd, signs=None, max_crossings: int = MAX_CROSSINGS) -> LaurentPolynomial:
    """Jones polynomial of a PD code; signs are read from the labels if omitted."""
    if signs is None:
        signs = [pd_sign(x, 2 * len(pd)) for x in pd]
    return jones_from_bracket(bracket_from_pd(pd, max_crossings), sum(signs))


def pd_sign(x, arcs: int) -> int:
    """Sign of X[a,b,c,d] from consecutive labelling (over-arc runs b->d or d->b)."""
    _, b, _, d = x
    if (d - b) % arcs == 1:
        return -1
    if (b - d) % arcs == 1:
        return 1
    raise ValueError(f"cannot read the sign of {x} from its labels")


def jones_polynomial(diagram: KnotDiagram, max_crossings: int = MAX_CROSSINGS) -> LaurentPolynomial:
    return jones_from_bracket(kauffman_bracket(diagram, max_crossings), diagram.writhe)


# classification ---------------------------------------------------------------

VERDICTS = ("jones_consistent_unknot", "trefoil_left", "trefoil_right", "other")


def verdict_for(jones: LaurentPolynomial) -> str:
    if jones == JONES_UNKNOT:
        return "jones_consistent_unknot"
    if jones == JONES_LEFT_TREFOIL:
        return "trefoil_left"
    if jones == JONES_RIGHT_TREFOIL:
        return "trefoil_right"
    return "other"


@dataclass(frozen=True)
class ClassificationResult:
    """Jones-based verdict. "jones_consistent_unknot" is not a proof of unknottedness."""

    verdict: str
    jones: LaurentPolynomial
    crossing_count: int
    writhe: int
    diagram: KnotDiagram

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "jones": self.jones.to_json(),
            "jones_text": self.jones.format(),
            "crossing_count": self.crossing_count,
            "writhe": self.writhe,
            "pd_code": [list(x) for x in self.diagram.pd_code],
            "direction": [format_rational(c) for c in self.diagram.direction],
        }


def classify(polyline, direction=None, seed: int = 0, max_crossings: int = MAX_CROSSINGS,
             check_embedded: bool = True) -> ClassificationResult:
    diagram = project_to_diagram(polyline, direction, seed=seed, check_embedded=check_embedded)
    jones = jones_polynomial(diagram, max_crossings)
    return ClassificationResult(verdict_for(jones), jones, diagram.crossing_count, diagram.writhe, diagram)
