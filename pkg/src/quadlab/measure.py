"""Floating-point distances between polylines (feature size, Hausdorff distance)."""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from .exact import to_float


def as_array(points) -> np.ndarray:
    return np.array([[to_float(c) for c in p] for p in points], dtype=float)


def _point_segments_distance(x: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each point in x (m,3) to the nearest of the segments ab (k,3)."""
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    ax = x[:, None, :] - a[None, :, :]
    t = np.clip(np.einsum("mkj,kj->mk", ax, ab) / denom, 0.0, 1.0)
    proj = a[None, :, :] + t[..., None] * ab[None, :, :]
    return np.linalg.norm(x[:, None, :] - proj, axis=2).min(axis=1)


def segment_distance(p0, p1, q0, q1) -> float:
    """Minimum distance between closed segments p0p1 and q0q1."""
    p0, p1, q0, q1 = (np.asarray(v, dtype=float) for v in (p0, p1, q0, q1))
    u, v, w = p1 - p0, q1 - q0, p0 - q0
    a, b, c, d, e = u @ u, u @ v, v @ v, u @ w, v @ w
    den = a * c - b * b
    candidates = []
    if den > 1e-300 * max(a * c, 1e-300):
        s = np.clip((b * e - c * d) / den, 0.0, 1.0)
        t = np.clip((a * e - b * d) / den, 0.0, 1.0) if c > 0 else 0.0
        candidates.append(np.linalg.norm(p0 + s * u - (q0 + t * v)))
    for x, s0, s1 in ((p0, q0, q1), (p1, q0, q1)):
        candidates.append(_point_segments_distance(x[None, :], s0[None, :], s1[None, :])[0])
    for x, s0, s1 in ((q0, p0, p1), (q1, p0, p1)):
        candidates.append(_point_segments_distance(x[None, :], s0[None, :], s1[None, :])[0])
    return float(min(candidates))


def feature_size(points) -> float:
    """Smallest distance between non-adjacent edges of a closed polyline."""
    pts = as_array(points)
    n = len(pts)
    best = np.inf
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            best = min(best, segment_distance(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]))
    return float(best)


def _directed_hausdorff(src: np.ndarray, dst: np.ndarray, samples: int) -> float:
    a, b = dst, np.roll(dst, -1, axis=0)
    best = 0.0
    ts = np.linspace(0.0, 1.0, samples)
    for i in range(len(src)):
        p, q = src[i], src[(i + 1) % len(src)]
        xs = p[None, :] + ts[:, None] * (q - p)[None, :]
        ds = _point_segments_distance(xs, a, b)
        k = int(np.argmax(ds))
        lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, samples - 1)]
        res = minimize_scalar(
            lambda t: -_point_segments_distance((p + t * (q - p))[None, :], a, b)[0],
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-12},
        )
        best = max(best, ds[k], -res.fun)
    return float(best)


def hausdorff_distance(first, second, samples: int = 257) -> float:
    """Hausdorff distance between two closed polylines, refined to about 1e-9."""
    a = first if isinstance(first, np.ndarray) else as_array(first)
    b = second if isinstance(second, np.ndarray) else as_array(second)
    return max(_directed_hausdorff(a, b, samples), _directed_hausdorff(b, a, samples))
