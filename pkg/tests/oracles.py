"""Independent float/Fraction reference implementations used as test oracles.

Nothing here imports the solver or the bracket code under test.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import numpy as np


def det3_fraction(u, v, w):
    """Sarrus rule on Fractions, columns u, v, w."""
    u, v, w = ([Fraction(str(c)) for c in x] for x in (u, v, w))
    return (
        u[0] * v[1] * w[2] + v[0] * w[1] * u[2] + w[0] * u[1] * v[2]
        - w[0] * v[1] * u[2] - v[0] * u[1] * w[2] - u[0] * w[1] * v[2]
    )


def _float_vertices(knot):
    return np.array([[float(c) for c in v] for v in knot.vertices])


def _line_through(X, A, v, i, j):
    """Direction of the line through points X meeting the lines of edges i and j."""
    n1 = np.cross(X - A[i], v[i])
    n2 = np.cross(X - A[j], v[j])
    return np.cross(n1, n2)


def _param_on(X, D, A, v, e):
    vd = np.cross(v[e], D)
    return np.einsum("...k,...k->...", np.cross(X - A[e], D), vd) / np.einsum("...k,...k->...", vd, vd)


def scan_quadrisecants(knot, samples: int = 4001, tol: float = 1e-12):
    """Quadrisecants by scanning a point along the lowest edge of each quadruple.

    For each point X on edge i the unique line through X meeting the lines of
    edges j and k is built; the Pluecker side product of that line with edge
    l's line changes sign where it meets line l. Sign changes are refined by
    bisection and kept when all four parameters lie in [0, 1). Returns
    (edges, (p, q, r, s)) tuples sorted by edges and p.
    """
    A = _float_vertices(knot)
    n = len(A)
    v = np.roll(A, -1, axis=0) - A
    ps = np.linspace(0.0, 1.0, samples)
    found = []

    def side(p, quad):
        i, j, k, l = quad
        X = A[i] + np.multiply.outer(p, v[i])
        D = _line_through(X, A, v, j, k)
        norm = np.linalg.norm(D, axis=-1, keepdims=True)
        D = D / np.where(norm == 0, 1.0, norm)
        return np.einsum("...k,...k->...", X - A[l], np.cross(D, v[l])), X, D

    def adjacent(a, b):
        return (a - b) % n in (1, n - 1)

    for quad in combinations(range(n), 4):
        # base edge i; j, k must not be adjacent or every line meeting both
        # passes through their shared vertex
        order = next(
            (b, j, k, l)
            for b in quad
            for j, k in combinations([e for e in quad if e != b], 2)
            if not adjacent(j, k)
            for l in [e for e in quad if e not in (b, j, k)]
        )
        i, j, k, l = order
        vals, _, _ = side(ps, order)
        for m in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
            lo, hi = ps[m], ps[m + 1]
            flo = vals[m]
            for _ in range(80):
                mid = (lo + hi) / 2
                fm = side(np.array(mid), order)[0]
                if np.sign(fm) == np.sign(flo):
                    lo, flo = mid, fm
                else:
                    hi = mid
                if hi - lo < tol:
                    break
            p = (lo + hi) / 2
            _, X, D = side(np.array(p), order)
            q, r, s = (float(_param_on(X, D, A, v, e)) for e in (j, k, l))
            # a sign change through a pole is not a root: the line must really meet line l
            hit = A[l] + s * v[l]
            miss = np.linalg.norm(np.cross(hit - X, D))
            if miss > 1e-6 * (1 + np.linalg.norm(hit - X)):
                continue
            by_edge = dict(zip(order, (float(p), q, r, s)))
            params = tuple(by_edge[e] for e in quad)
            # parameters at 1 are vertex passages, which belong to the next edge
            if all(-1e-12 <= t < 1 - 1e-9 for t in params):
                found.append((quad, params))
    return sorted(found)


# Kauffman bracket by brute-force state sum --------------------------------------


def _count_loops(pairs):
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        parent[find(a)] = find(b)
    return len({find(x) for pair in pairs for x in pair})


def bracket_by_states(pd):
    """<D> as {exponent of A: coefficient}, summing all 2^c smoothings directly.

    Crossing (a, b, c, d) is smoothed to (a b)(c d) with weight A or to
    (a d)(b c) with weight A^-1; a state with L loops contributes
    (-A^2 - A^-2)^(L - 1).
    """
    total: dict = {}
    for choice in product((0, 1), repeat=len(pd)):
        pairs = []
        power = 0
        for (a, b, c, d), ch in zip(pd, choice):
            if ch == 0:
                pairs += [(a, b), (c, d)]
                power += 1
            else:
                pairs += [(a, d), (b, c)]
                power -= 1
        loops = _count_loops(pairs)
        poly = {power: 1}
        for _ in range(loops - 1):
            nxt: dict = {}
            for e, c in poly.items():
                nxt[e + 2] = nxt.get(e + 2, 0) - c
                nxt[e - 2] = nxt.get(e - 2, 0) - c
            poly = nxt
        for e, c in poly.items():
            total[e] = total.get(e, 0) + c
    return {e: c for e, c in total.items() if c}


def gauss_writhe(points, subdivisions: int = 40):
    """Gauss double integral of a closed polyline, midpoint rule on a fine resampling."""
    P = np.array([[float(c) for c in v] for v in points])
    t = np.linspace(0, 1, subdivisions, endpoint=False)
    fine = np.concatenate([P[i] + np.outer(t, P[(i + 1) % len(P)] - P[i]) for i in range(len(P))])
    dr = np.roll(fine, -1, axis=0) - fine
    mid = fine + dr / 2
    D = mid[:, None, :] - mid[None, :, :]
    C = np.cross(dr[:, None, :], dr[None, :, :])
    num = np.einsum("ijk,ijk->ij", D, C)
    dist = np.linalg.norm(D, axis=2)
    np.fill_diagonal(dist, np.inf)
    return float((num / dist**3).sum() / (4 * np.pi))
