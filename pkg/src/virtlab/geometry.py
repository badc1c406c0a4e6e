"""Primitive solids: point queries and exact pair distances.

All primitives live in a local frame (cylinders and capsules have their
axis along local +y, the X3D convention) and are posed with rigid 4x4
transforms.  Pair distances use GJK on convex support functions; spheres
and capsules are handled as point/segment cores with a radius offset, so
their distances are exact and mildly negative values report penetration
depth between the inflated surfaces.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np


class UnsupportedShape(Exception):
    pass


@dataclass(frozen=True)
class Plane:
    """Half-space boundary n·x = offset with outward unit normal n."""
    normal: tuple
    offset: float = 0.0


@dataclass(frozen=True)
class Sphere:
    radius: float


@dataclass(frozen=True)
class Box:
    half_extents: tuple  # (hx, hy, hz)


@dataclass(frozen=True)
class Cylinder:
    radius: float
    half_height: float  # axis along local y


@dataclass(frozen=True)
class Capsule:
    radius: float
    half_length: float  # core segment along local y


def _as_vec(p) -> np.ndarray:
    return np.asarray(p, dtype=float)


def _to_local(transform: np.ndarray, p: np.ndarray) -> np.ndarray:
    r = transform[:3, :3]
    return r.T @ (p - transform[:3, 3])


def _to_world_point(transform: np.ndarray, p: np.ndarray) -> np.ndarray:
    return transform[:3, :3] @ p + transform[:3, 3]


def _to_world_dir(transform: np.ndarray, d: np.ndarray) -> np.ndarray:
    return transform[:3, :3] @ d


def _point_query_local(shape, p: np.ndarray):
    """Return (signed_distance, surface_point, outward_normal) in local frame.

    signed_distance < 0 means the point is inside the solid.
    """
    if isinstance(shape, Plane):
        n = _as_vec(shape.normal)
        n = n / np.linalg.norm(n)
        d = float(n @ p) - shape.offset
        return d, p - d * n, n

    if isinstance(shape, Sphere):
        r = np.linalg.norm(p)
        n = p / r if r > 1e-15 else np.array([0.0, 1.0, 0.0])
        return float(r - shape.radius), shape.radius * n, n

    if isinstance(shape, Box):
        h = _as_vec(shape.half_extents)
        q = np.clip(p, -h, h)
        if np.any(np.abs(p) > h):
            delta = p - q
            d = float(np.linalg.norm(delta))
            return d, q, delta / d
        # inside: nearest face
        gaps = h - np.abs(p)
        axis = int(np.argmin(gaps))
        sign = 1.0 if p[axis] >= 0 else -1.0
        n = np.zeros(3)
        n[axis] = sign
        surface = p.copy()
        surface[axis] = sign * h[axis]
        return -float(gaps[axis]), surface, n

    if isinstance(shape, Cylinder):
        r, hh = shape.radius, shape.half_height
        rho = math.hypot(p[0], p[2])
        u = (np.array([p[0], 0.0, p[2]]) / rho if rho > 1e-15
             else np.array([1.0, 0.0, 0.0]))
        dr = rho - r
        dy = abs(p[1]) - hh
        sy = 1.0 if p[1] >= 0 else -1.0
        if dr > 0 and dy > 0:  # rim
            surface = r * u + np.array([0.0, sy * hh, 0.0])
            delta = p - surface
            d = float(np.linalg.norm(delta))
            return d, surface, delta / d
        if dr > 0:  # side
            surface = np.array([r * u[0], p[1], r * u[2]])
            return float(dr), surface, u
        if dy > 0:  # cap
            surface = np.array([p[0], sy * hh, p[2]])
            return float(dy), surface, np.array([0.0, sy, 0.0])
        # inside
        if -dr <= -dy:
            surface = np.array([r * u[0], p[1], r * u[2]])
            return float(dr), surface, u
        surface = np.array([p[0], sy * hh, p[2]])
        return float(dy), surface, np.array([0.0, sy, 0.0])

    if isinstance(shape, Capsule):
        c = np.array([0.0, min(max(p[1], -shape.half_length), shape.half_length), 0.0])
        delta = p - c
        dist = float(np.linalg.norm(delta))
        n = delta / dist if dist > 1e-15 else np.array([1.0, 0.0, 0.0])
        return dist - shape.radius, c + shape.radius * n, n

    raise UnsupportedShape(f"no point query for {type(shape).__name__}")


def point_query(shape, transform: np.ndarray, point) -> Tuple[float, np.ndarray, np.ndarray]:
    """World-frame point query: (signed_distance, surface_point, outward_normal)."""
    p_local = _to_local(transform, _as_vec(point))
    d, surface, normal = _point_query_local(shape, p_local)
    return d, _to_world_point(transform, surface), _to_world_dir(transform, normal)


# ---------------------------------------------------------------------------
# GJK pair distance


def _support_local(shape, d: np.ndarray) -> np.ndarray:
    """Support point of the shape's convex core in direction d (local frame)."""
    if isinstance(shape, Box):
        h = _as_vec(shape.half_extents)
        return np.where(d >= 0, h, -h)
    if isinstance(shape, Cylinder):
        rho = math.hypot(d[0], d[2])
        if rho > 1e-15:
            x, z = shape.radius * d[0] / rho, shape.radius * d[2] / rho
        else:
            x, z = 0.0, 0.0
        y = shape.half_height if d[1] >= 0 else -shape.half_height
        return np.array([x, y, z])
    if isinstance(shape, Capsule):
        return np.array([0.0, shape.half_length if d[1] >= 0 else -shape.half_length, 0.0])
    if isinstance(shape, Sphere):
        return np.zeros(3)
    raise UnsupportedShape(f"no support function for {type(shape).__name__}")


def _core_radius(shape) -> float:
    if isinstance(shape, (Sphere, Capsule)):
        return shape.radius
    return 0.0


def _closest_on_triangle(a, b, c):
    """Closest point to the origin on triangle abc (Ericson)."""
    ab, ac, ap = b - a, c - a, -a
    d1, d2 = ab @ ap, ac @ ap
    if d1 <= 0 and d2 <= 0:
        return a
    bp = -b
    d3, d4 = ab @ bp, ac @ bp
    if d3 >= 0 and d4 <= d3:
        return b
    vc = d1 * d4 - d3 * d2
    if vc <= 0 <= d1 and d3 <= 0:
        v = d1 / (d1 - d3)
        return a + v * ab
    cp = -c
    d5, d6 = ab @ cp, ac @ cp
    if d6 >= 0 and d5 <= d6:
        return c
    vb = d5 * d2 - d1 * d6
    if vb <= 0 <= d2 and d6 <= 0:
        w = d2 / (d2 - d6)
        return a + w * ac
    va = d3 * d6 - d5 * d4
    if va <= 0 and d4 - d3 >= 0 and d5 - d6 >= 0:
        w = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        return b + w * (c - b)
    denom = va + vb + vc
    v, w = vb / denom, vc / denom
    return a + ab * v + ac * w


def _closest_on_simplex(points):
    """Closest point to the origin on the convex hull of 1..4 points."""
    n = len(points)
    if n == 1:
        return points[0]
    if n == 2:
        a, b = points
        ab = b - a
        denom = float(ab @ ab)
        if denom < 1e-30:
            return a
        t = min(max(float(-(a @ ab)) / denom, 0.0), 1.0)
        return a + t * ab
    if n == 3:
        return _closest_on_triangle(*points)
    a, b, c, d = points
    # origin inside the tetrahedron?
    def same_side(p1, p2, p3, p4):
        normal = np.cross(p2 - p1, p3 - p1)
        return (normal @ (p4 - p1)) * (normal @ (-p1)) >= 0
    if (same_side(a, b, c, d) and same_side(b, c, d, a)
            and same_side(c, d, a, b) and same_side(d, a, b, c)):
        return np.zeros(3)
    best = None
    for face in ((a, b, c), (a, b, d), (a, c, d), (b, c, d)):
        q = _closest_on_triangle(*face)
        if best is None or q @ q < best @ best:
            best = q
    return best


def gjk_core_distance(shape_a, tf_a, shape_b, tf_b,
                      tol: float = 1e-12, max_iter: int = 128) -> float:
    """Distance between the convex cores of two posed shapes (0 if overlapping)."""
    ra, rb = tf_a[:3, :3], tf_b[:3, :3]

    def support(d: np.ndarray) -> np.ndarray:
        sa = _to_world_point(tf_a, _support_local(shape_a, ra.T @ d))
        sb = _to_world_point(tf_b, _support_local(shape_b, rb.T @ (-d)))
        return sa - sb

    v = tf_a[:3, 3] - tf_b[:3, 3]
    if np.linalg.norm(v) < 1e-12:
        v = np.array([1.0, 0.0, 0.0])
    simplex = [support(-v)]
    v = _closest_on_simplex(simplex)
    for _ in range(max_iter):
        dist = float(np.linalg.norm(v))
        if dist < 1e-10:
            return 0.0
        w = support(-v)
        # no more progress toward the origin in direction -v
        if dist - float(v @ w) / dist <= tol * max(1.0, dist):
            return dist
        if any(np.linalg.norm(w - s) < 1e-14 for s in simplex):
            return dist
        simplex.append(w)
        v = _closest_on_simplex(simplex)
        # keep only the points supporting v (drop those not needed)
        if len(simplex) == 4 and float(np.linalg.norm(v)) < 1e-10:
            return 0.0
        kept = []
        for s in simplex:
            # a vertex supports v if removing it changes the closest point
            rest = [t for t in simplex if t is not s]
            if not rest or np.linalg.norm(_closest_on_simplex(rest) - v) > 1e-12:
                kept.append(s)
        simplex = kept if kept else [w]
    return float(np.linalg.norm(v))


def pair_distance(shape_a, tf_a, shape_b, tf_b) -> float:
    """Minimum distance between two posed solids.

    Negative values report penetration for sphere/capsule pairs (up to the
    summed radii); box/cylinder overlap saturates at 0.
    """
    core = gjk_core_distance(shape_a, tf_a, shape_b, tf_b)
    return core - _core_radius(shape_a) - _core_radius(shape_b)


def aabb(shape, transform: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """World-frame axis-aligned bounding box via support functions."""
    lo, hi = np.zeros(3), np.zeros(3)
    r = transform[:3, :3]
    radius = _core_radius(shape)
    for axis in range(3):
        d = np.zeros(3)
        d[axis] = 1.0
        hi[axis] = _to_world_point(transform, _support_local(shape, r.T @ d))[axis] + radius
        lo[axis] = _to_world_point(transform, _support_local(shape, r.T @ (-d)))[axis] - radius
    return lo, hi
