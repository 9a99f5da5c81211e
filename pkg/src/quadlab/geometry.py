"""Exact vector helpers and segment predicates over any exact number type."""

from __future__ import annotations

from dataclasses import dataclass

from .exact import det3, sign, to_float


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1], p[2] - q[2])


def add(p, q):
    return (p[0] + q[0], p[1] + q[1], p[2] + q[2])


def scale(p, s):
    return (p[0] * s, p[1] * s, p[2] * s)


def dot(p, q):
    return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


def cross(p, q):
    return (
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    )


def lerp(p, q, t):
    return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]), p[2] + t * (q[2] - p[2]))


def is_zero_vector(v) -> bool:
    return all(sign(c) == 0 for c in v)


def points_equal(p, q) -> bool:
    return is_zero_vector(sub(p, q))


def collinear(p, q, r) -> bool:
    return is_zero_vector(cross(sub(q, p), sub(r, p)))


def coplanar(p, q, r, s) -> bool:
    return sign(det3(sub(q, p), sub(r, p), sub(s, p))) == 0


def orient2d(p, q, r):
    """Twice the signed area of triangle pqr (2D points)."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def to_float_point(p) -> tuple[float, float, float]:
    return tuple(to_float(c) for c in p)


@dataclass(frozen=True)
class SegmentContact:
    """Non-empty intersection of two closed segments.

    kind is "transverse" (crossing at interior points of both), "touch"
    (a single point that is an endpoint of at least one segment) or
    "overlap" (a collinear sub-segment). ``locus`` holds one point or the
    two ends of the overlap; coordinates are exact when the field allows
    division and floats otherwise.
    """

    kind: str
    locus: tuple


def _drop_axis(p, axis):
    return tuple(p[i] for i in range(3) if i != axis)


def _on_segment_1d(x, a, b) -> bool:
    lo, hi = (a, b) if sign(b - a) >= 0 else (b, a)
    return sign(x - lo) >= 0 and sign(hi - x) >= 0


def _safe_point(a, b, num, den):
    try:
        return lerp(a, b, num / den)
    except TypeError:
        t = to_float(num) / to_float(den)
        fa, fb = to_float_point(a), to_float_point(b)
        return tuple(x + t * (y - x) for x, y in zip(fa, fb))


def _collinear_contact(a, b, c, d):
    axis = next(i for i in range(3) if sign(b[i] - a[i]) != 0)
    pts = [(a[axis], a), (b[axis], b)]
    if sign(pts[1][0] - pts[0][0]) < 0:
        pts.reverse()
    qts = [(c[axis], c), (d[axis], d)]
    if sign(qts[1][0] - qts[0][0]) < 0:
        qts.reverse()
    lo = pts[0] if sign(pts[0][0] - qts[0][0]) >= 0 else qts[0]
    hi = pts[1] if sign(pts[1][0] - qts[1][0]) <= 0 else qts[1]
    s = sign(hi[0] - lo[0])
    if s < 0:
        return None
    if s == 0:
        return SegmentContact("touch", (lo[1],))
    return SegmentContact("overlap", (lo[1], hi[1]))


def segment_contact(a, b, c, d) -> SegmentContact | None:
    """Exact intersection of closed segments ab and cd in 3-space (a != b, c != d)."""
    ab = sub(b, a)
    if sign(det3(ab, sub(c, a), sub(d, a))) != 0:
        return None
    normal = None
    for n in (cross(ab, sub(c, a)), cross(ab, sub(d, a)), cross(sub(d, c), sub(a, c))):
        if not is_zero_vector(n):
            normal = n
            break
    if normal is None:
        return _collinear_contact(a, b, c, d)
    axis = next(i for i in range(3) if sign(normal[i]) != 0)
    a2, b2, c2, d2 = (_drop_axis(p, axis) for p in (a, b, c, d))
    o1 = orient2d(c2, d2, a2)
    o2 = orient2d(c2, d2, b2)
    o3 = orient2d(a2, b2, c2)
    o4 = orient2d(a2, b2, d2)
    s1, s2, s3, s4 = sign(o1), sign(o2), sign(o3), sign(o4)
    if s1 * s2 < 0 and s3 * s4 < 0:
        return SegmentContact("transverse", (_safe_point(a, b, o1, o1 - o2),))
    if s1 * s2 > 0 or s3 * s4 > 0:
        return None
    # At least one endpoint lies on the other segment's line.
    for s, p, (u, v) in ((s1, a, (c, d)), (s2, b, (c, d)), (s3, c, (a, b)), (s4, d, (a, b))):
        if s == 0:
            k = next(i for i in range(3) if sign(v[i] - u[i]) != 0)
            if _on_segment_1d(p[k], u[k], v[k]):
                return SegmentContact("touch", (p,))
    return None


def polyline_contacts(points, closed: bool = True, first_only: bool = False):
    """All illegal contacts between segments of a polyline.

    Adjacent segments may share their common vertex only. Returns
    ``(i, j, SegmentContact)`` triples with i < j in lexicographic order.
    """
    m = len(points)
    nseg = m if closed else m - 1
    out = []
    for i in range(nseg):
        a, b = points[i], points[(i + 1) % m]
        for j in range(i + 1, nseg):
            c, d = points[j], points[(j + 1) % m]
            adjacent_next = j == i + 1
            adjacent_wrap = closed and i == 0 and j == nseg - 1
            contact = segment_contact(a, b, c, d)
            if contact is None:
                continue
            if (adjacent_next or adjacent_wrap) and contact.kind == "touch":
                shared = b if adjacent_next else a
                if points_equal(contact.locus[0], shared):
                    continue
            out.append((i, j, contact))
            if first_only:
                return out
    return out


@dataclass(frozen=True)
class AffineMap:
    """x -> matrix @ x + translation, with exact entries (matrix given by rows)."""

    matrix: tuple
    translation: tuple = (0, 0, 0)

    def linear(self, v):
        m = self.matrix
        return tuple(m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] for r in range(3))

    def __call__(self, p):
        return add(self.linear(p), self.translation)

    def compose(self, inner: AffineMap) -> AffineMap:
        """The map x -> self(inner(x))."""
        cols = [self.linear(tuple(inner.matrix[r][c] for r in range(3))) for c in range(3)]
        matrix = tuple(tuple(cols[c][r] for c in range(3)) for r in range(3))
        return AffineMap(matrix, self(inner.translation))

    def determinant(self):
        m = self.matrix
        return det3(*(tuple(m[r][c] for r in range(3)) for c in range(3)))

    @classmethod
    def identity(cls) -> AffineMap:
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
