"""Shrunken placements, connected sums and the counterexample constructions.

A guest knot K is placed near a point P of a host knot K' by an affine map
T built from exact rational rotations, a translation, a uniform scaling by
a power of two and a contraction along z. T is accepted only when

    (a) the regular projection plane of K is carried to a horizontal plane,
    (b) T(V) = P for a hull vertex V and T(K) lies within epsilon of P,
    (c) T(K) meets the wall plane Sigma only at P,
    (d) every line meeting three or more edges of T(K) is flatter than delta.

(a)-(c) are decided exactly; (d) is a numerical maximum over the families of
lines meeting three edges. Every "sufficiently small" parameter is found by
halving until the checks pass.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

import numpy as np
from gmpy2 import mpq
from scipy.optimize import minimize_scalar

from .approximation import approximate, find_self_intersections
from .catalog import builtin_knot
from .classify import is_regular_direction, jones_polynomial, project_to_diagram
from .errors import (
    ConstructionError,
    DegeneracyError,
    GeneralPositionError,
    InputError,
    NotEmbeddedError,
    PlacementError,
    ProjectionError,
)
from .exact import as_rational, format_rational, sign
from .geometry import AffineMap, add, cross, det3, dot, orient2d, points_equal, scale, segment_contact, sub
from .knot import PolygonalKnot, check_general_position, is_simple
from .measure import as_array, feature_size, hausdorff_distance
from .quadrisecants import find_all_quadrisecants

MAX_SHRINK = 60
ANGLE_SAMPLES = 256

E_Z = (mpq(0), mpq(0), mpq(1))


# rational rotations -----------------------------------------------------------


def rational_unit_vector(s, t) -> tuple:
    """Inverse stereographic projection of (s, t): a rational point on the unit sphere."""
    s, t = as_rational(s), as_rational(t)
    den = s * s + t * t + 1
    return (2 * s / den, 2 * t / den, (s * s + t * t - 1) / den)


def _is_unit(d) -> bool:
    return dot(d, d) == 1


def rotation_to_z(d) -> tuple:
    """Rational rotation matrix (rows) sending the unit vector d to e_z.

    A Householder reflection swaps d and e_z; flipping y afterwards makes the
    product a proper rotation, so chirality is preserved.
    """
    d = tuple(as_rational(c) for c in d)
    if not _is_unit(d):
        raise InputError("projection direction must be a rational unit vector")
    w = sub(d, E_Z)
    ww = dot(w, w)
    if ww == 0:
        return ((mpq(1), mpq(0), mpq(0)), (mpq(0), mpq(1), mpq(0)), (mpq(0), mpq(0), mpq(1)))
    rows = []
    for r in range(3):
        row = []
        for c in range(3):
            h = (1 if r == c else 0) - 2 * w[r] * w[c] / ww
            row.append(-h if r == 1 else h)
        rows.append(tuple(mpq(x) for x in row))
    return tuple(rows)


def rotation_about_z(t) -> tuple:
    """Counterclockwise rotation about the z-axis by 2*atan(t), exactly rational."""
    t = as_rational(t)
    den = 1 + t * t
    c, s = (1 - t * t) / den, 2 * t / den
    return ((c, -s, mpq(0)), (s, c, mpq(0)), (mpq(0), mpq(0), mpq(1)))


def _matmul(a, b):
    return tuple(tuple(sum(a[r][k] * b[k][c] for k in range(3)) for c in range(3)) for r in range(3))


def _apply(m, v):
    return tuple(m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] for r in range(3))


# projection and hull ----------------------------------------------------------


def find_regular_projection(knot, seed: int = 0, max_attempts: int = 10_000) -> tuple:
    """Rational unit normal of a plane (through the origin) onto which K projects regularly."""
    rng = random.Random(seed)
    candidates = [rational_unit_vector(mpq(1, 7), mpq(2, 11))]
    for _ in range(max_attempts):
        if candidates:
            d = candidates.pop()
        else:
            s = mpq(rng.randint(-40, 40), rng.randint(1, 40))
            t = mpq(rng.randint(-40, 40), rng.randint(1, 40))
            d = rational_unit_vector(s, t)
        if is_regular_direction(knot, d):
            return d
    raise ProjectionError(f"no regular projection found in {max_attempts} attempts")


def _plane_coordinates(points, direction):
    rot = rotation_to_z(direction)
    return [_apply(rot, p)[:2] for p in points]


def hull_vertex(knot, direction) -> int:
    """Index of a vertex whose projection is an extreme point of the projected vertex set.

    The lexicographically smallest projected point is always extreme; ties
    cannot happen for a regular projection.
    """
    pts = _plane_coordinates(knot.vertices, direction)
    best = 0
    for k in range(1, len(pts)):
        a, b = pts[k], pts[best]
        if sign(a[0] - b[0]) < 0 or (sign(a[0] - b[0]) == 0 and sign(a[1] - b[1]) < 0):
            best = k
    return best


# placement --------------------------------------------------------------------


@dataclass(frozen=True)
class Placement:
    direction: tuple
    hull_vertex: int
    wall_normal: tuple
    anchor: tuple
    epsilon: mpq
    delta: mpq
    transform: AffineMap
    scale: mpq
    z_factor: mpq
    turn: mpq
    iterations: int = 0

    def to_json(self) -> dict:
        q = format_rational
        return {
            "direction": [q(c) for c in self.direction],
            "hull_vertex": self.hull_vertex,
            "wall_normal": [q(c) for c in self.wall_normal],
            "anchor": [q(c) for c in self.anchor],
            "epsilon": q(self.epsilon),
            "delta": q(self.delta),
            "scale": q(self.scale),
            "z_factor": q(self.z_factor),
            "turn_tan_half_angle": q(self.turn),
            "iterations": self.iterations,
        }


@dataclass(frozen=True)
class PlacementCheck:
    passed: bool
    failed: str | None = None
    detail: str = ""
    max_angle: float = 0.0


def _extreme_rays(vectors):
    """Most clockwise and most counterclockwise of 2D vectors lying in an open half-plane."""
    lo = hi = vectors[0]
    for w in vectors[1:]:
        if sign(orient2d((0, 0), lo, w)) < 0:
            lo = w
        if sign(orient2d((0, 0), hi, w)) > 0:
            hi = w
    return lo, hi


def _turn_parameter(u, n, bits: int) -> mpq:
    """Rational tan(theta/2) approximating the angle from u to n."""
    theta = math.atan2(float(u[0] * n[1] - u[1] * n[0]), float(u[0] * n[0] + u[1] * n[1]))
    return mpq(round(math.tan(theta / 2) * 2**bits), 2**bits)


def _wall_side_ok(rotated, normal2) -> bool:
    return all(sign(w[0] * normal2[0] + w[1] * normal2[1]) > 0 for w in rotated)


def build_affine_placement(knot, direction, vertex: int, wall_normal, anchor, epsilon, delta,
                           max_iterations: int = MAX_SHRINK) -> Placement:
    """Affine map placing ``knot`` at ``anchor`` per conditions (a)-(d).

    ``wall_normal`` is a horizontal vector normal to Sigma pointing to the side
    that must receive the knot. The z-contraction is halved until (d) holds.
    """
    epsilon, delta = as_rational(epsilon), as_rational(delta)
    anchor = tuple(as_rational(c) for c in anchor)
    normal = tuple(as_rational(c) for c in wall_normal)
    if epsilon <= 0 or delta <= 0:
        raise InputError("epsilon and delta must be positive")
    if normal[2] != 0 or (normal[0] == 0 and normal[1] == 0):
        raise InputError("the wall plane must be perpendicular to the xy-plane")
    rot = rotation_to_z(direction)
    base = knot.vertices[vertex]
    local = [_apply(rot, sub(p, base)) for k, p in enumerate(knot.vertices)]
    others = [w[:2] for k, w in enumerate(local) if k != vertex]
    lo, hi = _extreme_rays(others)
    if sign(orient2d((0, 0), lo, hi)) == 0:
        inward = lo
    else:
        inward = (-lo[1] + hi[1], lo[0] - hi[0])
    if not all(sign(inward[0] * w[0] + inward[1] * w[1]) > 0 for w in others):
        raise PlacementError(f"vertex {vertex} is not extreme in the projection")
    n2 = normal[:2]
    turn = None
    for bits in (24, 48, 96, 192):
        t = _turn_parameter(inward, n2, bits)
        rz = rotation_about_z(t)
        if _wall_side_ok([_apply(rz, (w[0], w[1], 0))[:2] for w in others], n2):
            turn = t
            break
    if turn is None:
        raise PlacementError("could not orient the knot to one side of the wall")
    linear = _matmul(rotation_about_z(turn), rot)
    radius2 = max(dot(sub(p, base), sub(p, base)) for p in knot.vertices)
    lam = mpq(1)
    while lam * lam * radius2 >= epsilon * epsilon:
        lam /= 2
    flat = AffineMap(tuple(tuple(lam * x for x in row) for row in linear), (0, 0, 0))
    tau, _ = max_transversal_slope([flat(sub(p, base)) for p in knot.vertices])
    target = math.tan(float(delta))
    s = mpq(1)
    while s * mpq(tau) * 1.000001 >= target and s > mpq(1, 2**200):
        s /= 2
    for it in range(max_iterations):
        pl = _make_placement(direction, vertex, normal, anchor, epsilon, delta, linear, lam, s, turn, base, it)
        check = verify_placement(pl, knot)
        if check.passed:
            return pl
        if check.failed != "d":
            raise PlacementError(f"condition ({check.failed}) fails: {check.detail}")
        s /= 2
    raise PlacementError(f"condition (d) still fails after {max_iterations} contractions")


def _make_placement(direction, vertex, normal, anchor, epsilon, delta, linear, lam, s, turn, base, it):
    rows = tuple(
        tuple(lam * (s if r == 2 else 1) * linear[r][c] for c in range(3)) for r in range(3)
    )
    m = AffineMap(rows, (0, 0, 0))
    translation = sub(anchor, m(base))
    return Placement(tuple(as_rational(c) for c in direction), vertex, normal, anchor, epsilon, delta,
                     AffineMap(rows, translation), lam, s, turn, it)


def contract_z(pl: Placement, factor) -> Placement:
    """The same placement followed by a further z-contraction about the anchor."""
    factor = as_rational(factor)
    squeeze = AffineMap(((1, 0, 0), (0, 1, 0), (0, 0, factor)), (0, 0, 0))
    shift_in = AffineMap(((1, 0, 0), (0, 1, 0), (0, 0, 1)), tuple(-c for c in pl.anchor))
    shift_out = AffineMap(((1, 0, 0), (0, 1, 0), (0, 0, 1)), pl.anchor)
    T = shift_out.compose(squeeze.compose(shift_in.compose(pl.transform)))
    return replace(pl, transform=T, z_factor=pl.z_factor * factor)


def verify_placement(pl: Placement, knot) -> PlacementCheck:
    """Check (a)-(c) exactly and (d) numerically; report the first failure."""
    T = pl.transform
    image = T.linear(pl.direction)
    if image[0] != 0 or image[1] != 0:
        return PlacementCheck(False, "a", "projection normal is not mapped to the z-axis")
    placed = [T(p) for p in knot.vertices]
    if not points_equal(placed[pl.hull_vertex], pl.anchor):
        return PlacementCheck(False, "b", "hull vertex is not mapped to the anchor")
    eps2 = pl.epsilon * pl.epsilon
    for k, p in enumerate(placed):
        off = sub(p, pl.anchor)
        if dot(off, off) >= eps2:
            return PlacementCheck(False, "b", f"vertex {k} is outside the epsilon-ball")
    for k, p in enumerate(placed):
        if k != pl.hull_vertex and sign(dot(pl.wall_normal, sub(p, pl.anchor))) <= 0:
            return PlacementCheck(False, "c", f"vertex {k} is not strictly on the chosen side of the wall")
    tau, witness = max_transversal_slope([sub(p, pl.anchor) for p in placed])
    angle = math.atan(tau)
    if angle >= float(pl.delta):
        return PlacementCheck(False, "d", f"line through edges {witness} has angle {angle:.3g}", angle)
    return PlacementCheck(True, max_angle=angle)


def _slopes(d: np.ndarray) -> np.ndarray:
    horiz = np.hypot(d[..., 0], d[..., 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(horiz > 0, np.abs(d[..., 2]) / horiz, np.inf)


def _family_slopes(p, A, v, base, o1, o2):
    X = A[base] + np.outer(p, v[base])
    n1 = np.cross(X - A[o1], v[o1])
    n2 = np.cross(X - A[o2], v[o2])
    D = np.cross(n1, n2)
    norm = np.linalg.norm(D, axis=1)
    scale_ = max(np.linalg.norm(v[base]), 1e-300)
    ok = norm > 1e-14 * scale_**4
    slopes = np.zeros(len(p))
    for o in (o1, o2):
        vd = np.cross(v[o], D)
        den = np.einsum("ij,ij->i", vd, vd)
        with np.errstate(divide="ignore", invalid="ignore"):
            q = np.einsum("ij,ij->i", np.cross(X - A[o], D), vd) / den
        ok &= (den > 0) & (q >= -1e-12) & (q <= 1 + 1e-12)
    slopes[ok] = _slopes(D[ok])
    return slopes


def max_transversal_slope(points):
    """Largest |dz| / |dxy| over lines meeting three edges of a closed polygon.

    Covers the one-parameter families through three pairwise distinct edges
    (parameterized from each of the three) and the pencils through a vertex
    and a non-incident edge; samples are refined by bounded scalar search.
    Returns (slope, witness edges).
    """
    P = as_array(points)
    n = len(P)
    A = P
    v = np.roll(P, -1, axis=0) - P
    grid = np.linspace(0.0, 1.0, ANGLE_SAMPLES)
    best, witness = 0.0, ()

    def refine(fn, k):
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, ANGLE_SAMPLES - 1)]
        res = minimize_scalar(lambda x: -fn(np.array([x]))[0], bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        return -res.fun

    for a in range(n):
        for k in range(n):
            if k == a or (k + 1) % n == a:
                continue

            def pencil(r, a=a, k=k):
                return _slopes(A[k] + np.outer(r, v[k]) - A[a])

            vals = pencil(grid)
            j = int(np.argmax(vals))
            top = max(vals[j], refine(pencil, j))
            if top > best:
                best, witness = top, (("vertex", a), k)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for base, o1, o2 in ((i, j, k), (j, i, k), (k, i, j)):

                    def fam(p, base=base, o1=o1, o2=o2):
                        return _family_slopes(p, A, v, base, o1, o2)

                    vals = fam(grid)
                    m = int(np.argmax(vals))
                    if vals[m] <= best and vals[m] == 0:
                        continue
                    top = max(vals[m], refine(fam, m))
                    if top > best:
                        best, witness = top, (i, j, k)
    return float(best), witness


# connected sum ----------------------------------------------------------------


@dataclass(frozen=True)
class ResolutionChoice:
    """Replacement points for P: ``first`` joins the host's preceding vertex,
    ``second`` its following vertex. ``reverse_guest`` None means choose the
    guest's direction by the xy-projection rule. ``check_sweep`` also demands
    that sliding the joins from P to the two points is an isotopy."""

    first: tuple
    second: tuple
    reverse_guest: bool | None = None
    check_sweep: bool = False


def _on_box(p, q, r) -> bool:
    return all(sign(min(p[k], q[k]) - r[k]) <= 0 and sign(r[k] - max(p[k], q[k])) <= 0 for k in (0, 1))


def _segments_meet_2d(a, b, c, d) -> bool:
    """Closed-segment intersection of the xy-projections of ab and cd, exactly."""
    a, b, c, d = (p[:2] for p in (a, b, c, d))
    o1, o2 = sign(orient2d(c, d, a)), sign(orient2d(c, d, b))
    o3, o4 = sign(orient2d(a, b, c)), sign(orient2d(a, b, d))
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return ((o1 == 0 and _on_box(c, d, a)) or (o2 == 0 and _on_box(c, d, b))
            or (o3 == 0 and _on_box(a, b, c)) or (o4 == 0 and _on_box(a, b, d)))


class SweepError(ConstructionError):
    """The split points sit too far from P for the joins to slide there freely."""


def _flatten(tri_normal):
    axis = max(range(3), key=lambda i: abs(tri_normal[i]))
    return lambda p: tuple(p[i] for i in range(3) if i != axis)


def _in_triangle_2d(x, a, b, c) -> bool:
    s = [sign(orient2d(a, b, x)), sign(orient2d(b, c, x)), sign(orient2d(c, a, x))]
    return not (any(v > 0 for v in s) and any(v < 0 for v in s))


def _segment_meets_triangle(a, b, tri) -> bool:
    """Closed segment ab against the closed triangle, exactly."""
    p, q, r = tri
    e1, e2 = sub(q, p), sub(r, p)
    sa, sb = sign(det3(e1, e2, sub(a, p))), sign(det3(e1, e2, sub(b, p)))
    if sa * sb > 0:
        return False
    flat = _flatten(cross(e1, e2))
    p2, q2, r2 = flat(p), flat(q), flat(r)
    if sa == 0 and sb == 0:
        a2, b2 = flat(a), flat(b)
        if _in_triangle_2d(a2, p2, q2, r2) or _in_triangle_2d(b2, p2, q2, r2):
            return True
        return any(_segments_meet_2d(a2, b2, u, v) for u, v in ((p2, q2), (q2, r2), (r2, p2)))
    da, db = det3(e1, e2, sub(a, p)), det3(e1, e2, sub(b, p))
    x = add(a, scale(sub(b, a), as_rational(da) / (da - db)))
    return _in_triangle_2d(flat(x), p2, q2, r2)


def _leaves_triangle(v, w, tri) -> bool:
    """True when the segment from the triangle corner v to w meets the triangle only at v."""
    p, q, r = tri
    e1, e2 = sub(q, p), sub(r, p)
    if sign(det3(e1, e2, sub(w, p))) != 0:
        return True
    flat = _flatten(cross(e1, e2))
    u1, u2 = (flat(c) for c in tri if not points_equal(c, v))
    v2, w2 = flat(v), flat(w)
    turn = sign(orient2d(v2, u1, u2))
    inside = sign(orient2d(v2, u1, w2)) * turn >= 0 and sign(orient2d(v2, w2, u2)) * turn >= 0
    return not inside


def _sweep_is_clear(tri, edges, corners) -> bool:
    """The triangle meets the listed edges at most in a shared corner."""
    for a, b in edges:
        shared = [c for c in corners if points_equal(c, a) or points_equal(c, b)]
        if shared:
            v = shared[0]
            if not _leaves_triangle(v, b if points_equal(v, a) else a, tri):
                return False
        elif _segment_meets_triangle(a, b, tri):
            return False
    return True


def _resolution_is_isotopic(host_edges, guest_ring, P, P1, P2, B, A) -> bool:
    """Sliding the joins from P to P1 and P2 sweeps two triangles that must be free of the knot.

    ``host_edges`` excludes the host edges BP and PA at P; ``guest_ring`` starts at P.
    """
    first, last = guest_ring[1], guest_ring[-1]
    guest_edges = [(guest_ring[i], guest_ring[i + 1]) for i in range(1, len(guest_ring) - 1)]
    tri1 = (P, P1, first)
    if not _sweep_is_clear(tri1, host_edges + guest_edges + [(P, last), (P, A)], tri1):
        return False
    tri2 = (P, P2, last)
    return _sweep_is_clear(tri2, host_edges + guest_edges + [(B, P1), (P1, first)], tri2)

def _locate(host, P):
    """('vertex', index) or ('edge', index) for a point of the host."""
    V = host.vertices
    n = len(V)
    for i, q in enumerate(V):
        if points_equal(q, P):
            return "vertex", i
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        ab, ap = sub(b, a), sub(P, a)
        if all(c == 0 for c in cross(ab, ap)):
            t = dot(ap, ab) / dot(ab, ab)
            if 0 < t < 1:
                return "edge", i
    raise InputError("the anchor point is not on the host knot")


def check_wedge(host, placed, P) -> tuple | None:
    """First contact between the placed guest and the host other than P, or None."""
    H = host.vertices
    m, n = len(H), len(placed)
    for g in range(n):
        a, b = placed[g], placed[(g + 1) % n]
        for h in range(m):
            c, d = H[h], H[(h + 1) % m]
            contact = segment_contact(a, b, c, d)
            if contact is None:
                continue
            if contact.kind == "touch" and points_equal(contact.locus[0], P):
                continue
            return g, h, contact
    return None


def connected_sum(host, guest, P, placement: Placement, resolution: ResolutionChoice) -> PolygonalKnot:
    """K #_P K' for a verified placement of ``guest`` at the point P of ``host``.

    The result has e(K) + e(K') edges when P is a host vertex and one more
    when P is interior to a host edge.
    """
    P = tuple(as_rational(c) for c in P)
    where, index = _locate(host, P)
    placed = [placement.transform(p) for p in guest.vertices]
    v = placement.hull_vertex
    if not points_equal(placed[v], P):
        raise ConstructionError("placement does not send the hull vertex to P")
    bad = check_wedge(host, placed, P)
    if bad is not None:
        raise ConstructionError(f"placed guest edge {bad[0]} meets host edge {bad[1]} away from P")
    ring = placed[v:] + placed[:v]
    forward = ring[1:]
    H = list(host.vertices)
    if where == "vertex":
        before, after = H[:index], H[index + 1:]
    else:
        before, after = H[: index + 1], H[index + 1:]
    P1 = tuple(as_rational(c) for c in resolution.first)
    P2 = tuple(as_rational(c) for c in resolution.second)
    if points_equal(P1, P2):
        raise InputError("the two replacement points coincide")
    m = len(H)
    B, A = (H[index - 1] if where == "vertex" else H[index]), H[(index + 1) % m]
    skip = {(index - 1) % m, index} if where == "vertex" else {index}
    host_edges = [(H[e], H[(e + 1) % m]) for e in range(m) if e not in skip]
    sweep_blocked = False
    options = [False, True] if resolution.reverse_guest is None else [resolution.reverse_guest]
    last_error = None
    for reverse in options:
        mid = list(reversed(forward)) if reverse else list(forward)
        if resolution.reverse_guest is None and _segments_meet_2d(P1, mid[0], P2, mid[-1]):
            last_error = "projections of the two new guest edges intersect"
            continue
        if resolution.check_sweep and not _resolution_is_isotopic(host_edges, [P] + mid, P, P1, P2, B, A):
            last_error = "a sweep triangle at P meets the knot"
            sweep_blocked = True
            continue
        verts = tuple(before + [P1] + mid + [P2] + after)
        try:
            knot = PolygonalKnot(verts, f"{guest.name}#{host.name}")
        except InputError as exc:
            last_error = str(exc)
            continue
        check = is_simple(knot)
        if check.simple:
            return knot
        last_error = f"result is not embedded (edges {check.witness[:2]})"
    if sweep_blocked:
        raise SweepError(f"could not resolve P: {last_error}")
    raise ConstructionError(f"could not resolve P: {last_error}")


# perturbation -----------------------------------------------------------------


def _dyadic_below(x: float) -> mpq:
    if x <= 0 or not math.isfinite(x):
        return mpq(0)
    return mpq(1, 2 ** math.ceil(-math.log2(x)))


def is_generic(knot) -> tuple[bool, str]:
    if not check_general_position(knot, exhaustive=False).passed:
        return False, "general position"
    if not is_simple(knot).simple:
        return False, "not embedded"
    try:
        find_all_quadrisecants(knot)
    except (DegeneracyError, GeneralPositionError) as exc:
        return False, type(exc).__name__
    return True, ""


def perturb_generic(knot, magnitude=None, seed: int = 0, max_halvings: int = MAX_SHRINK,
                    transcript: dict | None = None) -> PolygonalKnot:
    """Seeded rational perturbation of every vertex within ``magnitude``, halved until generic.

    Generic means: general position, embedded, finitely many quadrisecants
    and no quintisecant. ``magnitude`` 0 returns the knot if it is generic.
    """
    if magnitude is None:
        magnitude = _dyadic_below(feature_size(knot.vertices) / 8)
    magnitude = as_rational(magnitude)
    rng = random.Random(seed)
    grid = 2**20
    reasons = []
    for attempt in range(max_halvings + 1):
        if magnitude == 0:
            cand = knot
        else:
            verts = []
            for p in knot.vertices:
                off = [mpq(rng.randint(-grid, grid), grid) for _ in range(3)]
                # keep the offset inside the ball of radius magnitude
                verts.append(tuple(c + o * magnitude / 2 for c, o in zip(p, off)))
            try:
                cand = PolygonalKnot(tuple(verts), knot.name)
            except InputError as exc:
                reasons.append(str(exc))
                magnitude /= 2
                continue
        ok, why = is_generic(cand)
        if ok:
            if transcript is not None:
                transcript.update({"seed": seed, "magnitude": format_rational(magnitude),
                                   "attempts": attempt + 1, "rejections": reasons})
            return cand
        reasons.append(why)
        if magnitude == 0:
            break
        magnitude /= 2
    raise ConstructionError(f"perturbation did not reach a generic knot: {reasons[-3:]}")


# constructions ----------------------------------------------------------------


@dataclass
class ConstructionResult:
    knot: PolygonalKnot
    transcript: dict = field(default_factory=dict)


def _wall_normal(host, index, side: int):
    """Horizontal normal of the vertical plane through the host vertex and its next edge."""
    V = host.vertices
    n = len(V)
    prev_, here, nxt = V[index - 1], V[index], V[(index + 1) % n]
    for other in (prev_, nxt):
        nrm = cross(sub(other, here), E_Z)
        if nrm[0] != 0 or nrm[1] != 0:
            return tuple(side * c for c in nrm)
    raise InputError("no vertical wall plane through the anchor")


def separating_wall(host, index, side: int = 1):
    """Horizontal normal n of a vertical plane through host vertex ``index`` with
    both host edges at that vertex in the closed half-space n.x <= 0.

    The guest then goes on the open side n.x > 0, away from the host arc.
    ``side`` = -1 picks the mirror candidate order.
    """
    V = host.vertices
    P = V[index]
    a = sub(V[index - 1], P)[:2]
    b = sub(V[(index + 1) % len(V)], P)[:2]

    def inf_norm(w):
        return max(abs(w[0]), abs(w[1])) or 1

    a_, b_ = (tuple(c / inf_norm(w) for c in w) for w in (a, b))
    candidates = [
        (-(a_[0] + b_[0]), -(a_[1] + b_[1])),
        (-a_[1], a_[0]), (a_[1], -a_[0]), (-b_[1], b_[0]), (b_[1], -b_[0]),
    ]
    if side < 0:
        candidates = candidates[1:] + candidates[:1]
    for n in candidates:
        if n == (0, 0):
            continue
        if sign(n[0] * a[0] + n[1] * a[1]) <= 0 and sign(n[0] * b[0] + n[1] * b[1]) <= 0:
            return (n[0], n[1], mpq(0))
    raise ConstructionError(f"no vertical plane at vertex {index} separates its two edges from a side")


def _host_clearance(host, index) -> float:
    V = as_array(host.vertices)
    n = len(V)
    from .measure import _point_segments_distance

    edges = [e for e in range(n) if e != index and (e + 1) % n != index]
    a = np.array([V[e] for e in edges])
    b = np.array([V[(e + 1) % n] for e in edges])
    return float(_point_segments_distance(V[index][None, :], a, b)[0])


def _guest_ratio(knot) -> float:
    pts = as_array(knot.vertices)
    diam = max(np.linalg.norm(p - q) for p in pts for q in pts)
    return feature_size(knot.vertices) / diam


def _attach(guest, host, index, normal, epsilon, delta, split, seed, perturb, transcript, sweep):
    direction = find_regular_projection(guest, seed=seed)
    vertex = hull_vertex(guest, direction)
    P = host.vertices[index]
    pl = build_affine_placement(guest, direction, vertex, normal, P, epsilon, delta)
    transcript["placement"] = pl.to_json()
    P1, P2 = split
    joined = connected_sum(host, guest, P, pl, ResolutionChoice(P1, P2, check_sweep=sweep))
    if perturb:
        info: dict = {}
        joined = perturb_generic(joined, seed=seed, transcript=info)
        transcript["perturbation"] = info
    return joined


def _run_shrink_loop(kind, guest, host, index, split_for, outcome, eta, epsilon, delta, normal, seed,
                     perturb, max_iterations, sweep=True):
    if eta is not None and as_rational(eta) <= 0:
        raise InputError("eta must be positive")
    if guest.n < 3:
        raise InputError("the guest knot needs at least three edges")
    if not is_simple(guest).simple:
        raise NotEmbeddedError("the guest knot is not embedded")
    eps = as_rational(epsilon) if epsilon is not None else _dyadic_below(_host_clearance(host, index) / 4)
    dlt = as_rational(delta) if delta is not None else mpq(1, 8)
    ratio = _guest_ratio(guest)
    fixed_eta = eta is not None
    et = as_rational(eta) if fixed_eta else _dyadic_below(float(eps) * min(1 / 16, ratio / 8))
    history = []
    for it in range(max_iterations):
        transcript = {"construction": kind, "iteration": it, "epsilon": format_rational(eps),
                      "delta": format_rational(dlt), "eta": format_rational(et),
                      "wall_normal": [format_rational(c) for c in normal], "seed": seed}
        try:
            joined = _attach(guest, host, index, normal, eps, dlt, split_for(et), seed, perturb, transcript,
                             sweep)
            ok, why = outcome(joined) if outcome else (True, "")
            if ok:
                transcript["history"] = history
                return ConstructionResult(joined.with_name(f"{kind}({guest.name})"), transcript)
            history.append({"iteration": it, "failure": why})
        except SweepError as exc:
            history.append({"iteration": it, "failure": f"{type(exc).__name__}: {exc}"})
            if not fixed_eta:
                # a thinner sweep clears the guest without moving it
                et /= 2
                continue
        except (ConstructionError, ProjectionError, GeneralPositionError, NotEmbeddedError) as exc:
            history.append({"iteration": it, "failure": f"{type(exc).__name__}: {exc}"})
        eps /= 2
        dlt /= 2
        if not fixed_eta:
            et /= 2
    raise ConstructionError(f"{kind}: no valid parameters within {max_iterations} shrink steps; "
                            f"last failure: {history[-1]['failure'] if history else 'none'}")


def connect_knots(host, guest, index: int, *, seed: int = 0, side: int = 1, epsilon=None, delta=None,
                  eta=None, perturb: bool = False, max_iterations: int = MAX_SHRINK) -> ConstructionResult:
    """Connected sum with the guest attached at host vertex ``index``.

    P is split into the points at relative distance eta along the two host
    edges at P, so the host keeps its edges and the result has
    e(host) + e(guest) edges.
    """
    V = host.vertices
    P, before, after = V[index], V[index - 1], V[(index + 1) % len(V)]

    def split(et):
        return add(P, scale(sub(before, P), et)), add(P, scale(sub(after, P), et))

    normal = separating_wall(host, index, side)
    return _run_shrink_loop("connected-sum", guest, host, index, split, None, eta, epsilon, delta, normal,
                            seed, perturb, max_iterations)


def _star_outcome(knot):
    polygon = approximate(knot)
    report = find_self_intersections(polygon)
    if report.is_embedded:
        return False, "approximation is embedded"
    return True, ""


def build_K_star(knot, eta=None, *, epsilon=None, delta=None, side: int = 1, seed: int = 0,
                 perturb: bool = True, verify_outcome: bool = True,
                 max_iterations: int = MAX_SHRINK) -> ConstructionResult:
    """Knot of the type of ``knot`` with e + 6 edges whose approximation self-intersects.

    The guest is attached at W3 = (2, 0, 1) of the hexagonal host, Sigma is the
    plane y = 0 and P splits into (2 - eta, 0, 1) and (2 + eta, 0, 1).
    """
    host = builtin_knot("k6")

    def split(et):
        return (mpq(2) - et, mpq(0), mpq(1)), (mpq(2) + et, mpq(0), mpq(1))

    return _run_shrink_loop("k-star", knot, host, 2, split, _star_outcome if verify_outcome else None,
                            eta, epsilon, delta, _wall_normal(host, 2, side), seed, perturb, max_iterations)


_HOST_DIAMOND_JONES = {}


def host_diamond_jones():
    """Jones polynomial of the approximation of the 14-edge host (computed once)."""
    if "k14" not in _HOST_DIAMOND_JONES:
        from .classify import classify

        _HOST_DIAMOND_JONES["k14"] = classify(approximate(builtin_knot("k14"))).jones
    return _HOST_DIAMOND_JONES["k14"]


def _diamond_outcome(guest_jones):
    def check(knot):
        polygon = approximate(knot)
        report = find_self_intersections(polygon)
        if not report.is_embedded:
            return False, "approximation is not embedded"
        jones = jones_polynomial(project_to_diagram(polygon, check_embedded=False))
        want = guest_jones * host_diamond_jones()
        if jones != want:
            return False, f"approximation has Jones {jones.format()}, expected {want.format()}"
        return True, ""

    return check


def build_K_diamond(knot, eta=None, *, epsilon=None, delta=None, side: int = 1, seed: int = 0,
                    perturb: bool = True, verify_outcome: bool = True,
                    max_iterations: int = MAX_SHRINK) -> ConstructionResult:
    """Knot of the type of ``knot`` with e + 14 edges whose approximation gains a trefoil summand.

    The guest is attached at W7 = (10, -1, -8) of the 14-edge host, Sigma
    contains W6, W7, W8, and P splits into (10 - 10 eta, eta - 1, -8) and W7.
    The outcome check requires Jones(approximation) = Jones(knot) times the
    Jones polynomial of the host's own approximation.
    """
    host = builtin_knot("k14")

    def split(et):
        return (mpq(10) - 10 * et, et - 1, mpq(-8)), host.vertices[6]

    outcome = None
    if verify_outcome:
        outcome = _diamond_outcome(jones_polynomial(project_to_diagram(knot)))
    return _run_shrink_loop("k-diamond", knot, host, 6, split, outcome, eta, epsilon, delta,
                            _wall_normal(host, 6, side), seed, perturb, max_iterations,
                            sweep=False)


# subdivision ------------------------------------------------------------------


def _approx_len_scale(vec, length: float) -> tuple:
    """Rational multiple of ``vec`` with Euclidean length close to ``length``."""
    norm = math.sqrt(float(dot(vec, vec)))
    f = mpq(round(length / norm * 2**30), 2**30)
    return scale(vec, f)


def _gadget(A, B, Z, C, tent: mpq, extend: mpq, kappa: mpq):
    """Vertices (A', W2, X3, W4) replacing edge AB; B' is produced by the next call."""
    AB = sub(B, A)
    length = math.sqrt(float(dot(AB, AB)))
    normal = cross(sub(A, Z), AB)
    if all(c == 0 for c in normal):
        normal = cross(sub(C, B), AB)
    up = _approx_len_scale(normal, length)
    X2 = add(A, scale(AB, mpq(1, 4)))
    X4 = add(A, scale(AB, mpq(3, 4)))
    X3 = add(add(A, scale(AB, mpq(1, 2))), scale(up, tent))
    W2 = add(X2, scale(sub(X2, X3), kappa))
    W4 = add(X4, scale(sub(X4, X3), kappa))
    A1 = add(A, scale(sub(A, Z), extend))
    B1 = add(B, scale(sub(B, C), extend))
    return A1, W2, X3, W4, B1


def subdivided_vertices(knot, tent, extend, kappa=mpq(1, 5)) -> tuple:
    """The 5 * floor((n + 1) / 2) vertices of the every-other-edge gadget knot."""
    V = knot.vertices
    n = len(V)
    gadgets = list(range(0, n, 2))
    out = []
    for e in gadgets:
        A, B = V[e], V[(e + 1) % n]
        Z, C = V[e - 1], V[(e + 2) % n]
        A1, W2, X3, W4, B1 = _gadget(A, B, Z, C, tent, extend, kappa)
        out.extend([A1, W2, X3, W4, B1])
    return tuple(out)


def gadget_scale(knot, tent, extend, kappa=mpq(1, 5)) -> float:
    """Smallest gadget feature: extension lengths and the tent's foot offsets.

    The gadget quadrisecants survive perturbations well below this size. The
    tent edges meet the line at an angle of about 4 * tent, which amplifies a
    vertex shift by 1 / (4 * tent) where the line reaches the extensions.
    """
    V = as_array(knot.vertices)
    n = len(V)
    out = math.inf
    slack = min(1.0, 4 * float(tent))
    for e in range(0, n, 2):
        A, B, Z, C = V[e], V[(e + 1) % n], V[e - 1], V[(e + 2) % n]
        out = min(out, slack * float(extend) * np.linalg.norm(A - Z), slack * float(extend) * np.linalg.norm(B - C),
                  float(kappa * tent) * np.linalg.norm(B - A) / 2)
    return out


def subdivide_for_trefoil_sum(knot, *, tent=mpq(1, 8), extend=mpq(1, 16), seed: int = 0,
                              tolerance: float | None = None,
                              max_iterations: int = MAX_SHRINK) -> ConstructionResult:
    """Replace every other edge by the four-edge gadget of the hexagonal example.

    Each gadget contributes one quadrisecant running along the original edge,
    so the approximation of the result stays close to ``knot``. For odd n
    the two gadgets meeting at V0 are joined by one extra short edge. The
    result is perturbed to be generic and accepted when it is embedded and
    its approximation is within ``tolerance`` (Hausdorff) of ``knot``;
    otherwise the gadget parameters are halved.
    """
    n = knot.n
    if n < 4:
        raise InputError("subdivision needs at least four edges")
    if not is_simple(knot).simple:
        raise NotEmbeddedError("input knot is not embedded")
    tol = tolerance if tolerance is not None else feature_size(knot.vertices) / 4
    tent, extend = as_rational(tent), as_rational(extend)
    history = []
    for it in range(max_iterations):
        try:
            verts = subdivided_vertices(knot, tent, extend)
            cand = PolygonalKnot(verts, f"subdivided({knot.name})")
            if not is_simple(cand).simple:
                raise ConstructionError("gadget knot is not embedded")
            info: dict = {}
            limit = min(feature_size(cand.vertices), gadget_scale(knot, tent, extend))
            cand = perturb_generic(cand, _dyadic_below(limit / 8), seed=seed, transcript=info)
            polygon = approximate(cand)
            dist = hausdorff_distance(as_array(polygon.vertices), as_array(knot.vertices))
            if dist < tol:
                transcript = {"construction": "subdivide", "iteration": it, "tent": format_rational(tent),
                              "extend": format_rational(extend), "hausdorff": dist, "tolerance": tol,
                              "perturbation": info, "history": history}
                return ConstructionResult(cand, transcript)
            history.append({"iteration": it, "failure": f"Hausdorff distance {dist:.3g} >= {tol:.3g}"})
        except (ConstructionError, InputError, DegeneracyError) as exc:
            history.append({"iteration": it, "failure": f"{type(exc).__name__}: {exc}"})
        tent /= 2
        extend /= 2
    raise ConstructionError(f"subdivision did not converge; last failure: {history[-1]['failure']}")


def build_subdivided_diamond(knot, eta=None, *, seed: int = 0, verify_outcome: bool = False,
                             **kwargs) -> ConstructionResult:
    """Subdivide then attach to the 14-edge host: 5 * floor((n + 1) / 2) + 14 edges."""
    sub_ = subdivide_for_trefoil_sum(knot, seed=seed)
    res = build_K_diamond(sub_.knot, eta, seed=seed, verify_outcome=verify_outcome, **kwargs)
    res.transcript["subdivision"] = sub_.transcript
    return res
