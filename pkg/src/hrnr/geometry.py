"""Planar convex geometry on the complex plane.

Points are Python/numpy complex numbers. Polygons are convex, stored
counterclockwise with the lexicographically smallest vertex first, and
tagged with their degeneracy kind.
"""
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    CollinearOverlap,
    DegenerateChord,
    DegenerateTriangle,
    EmptyRegion,
    OutsideTriangle,
)

EPS_GEOM = 1e-9
EPS_AREA = 1e-12

EMPTY = "Empty"
POINT = "Point"
SEGMENT = "Segment"
POLYGON = "Polygon"


def cross(a, b):
    """z-component of the cross product of two plane vectors given as complex."""
    return a.real * b.imag - a.imag * b.real


def dot(a, b):
    return a.real * b.real + a.imag * b.imag


@dataclass(frozen=True)
class HalfPlane:
    """The closed half-plane ``{z : <z, normal> <= offset}``."""

    normal: complex
    offset: float

    def __post_init__(self):
        if abs(abs(self.normal) - 1.0) > 1e-12:
            raise ValueError("half-plane normal must be a unit vector")

    def signed_distance(self, z):
        return dot(z, self.normal) - self.offset

    def contains(self, z, tol=EPS_GEOM):
        return self.signed_distance(z) <= tol


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: tuple
    kind: str

    @classmethod
    def empty(cls):
        return cls((), EMPTY)

    @property
    def is_empty(self):
        return self.kind == EMPTY

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def area(self):
        if self.kind != POLYGON:
            return 0.0
        return polygon_area(self.vertices)

    def halfplanes(self):
        """Bounding half-planes of a ``Polygon`` (one per edge)."""
        if self.kind != POLYGON:
            raise ValueError("only full polygons have an edge description")
        return [line_halfplane(a, b) for a, b in self.edges()]


class EigenTriangle(NamedTuple):
    """Index triple ``(a, b, c)`` into a spectrum, reduced modulo its size."""

    a: int
    b: int
    c: int

    @classmethod
    def make(cls, a, b, c, n):
        tri = cls(a % n, b % n, c % n)
        if len(set(tri)) != 3:
            raise ValueError(f"eigentriangle indices must be distinct, got {tri}")
        return tri


def polygon_area(vertices):
    v = list(vertices)
    s = 0.0
    for i in range(len(v)):
        s += cross(v[i], v[(i + 1) % len(v)])
    return 0.5 * s


def line_halfplane(a, b):
    """Half-plane to the left of the directed line from ``a`` to ``b``."""
    d = b - a
    length = abs(d)
    if length == 0:
        raise DegenerateChord("line through coincident points")
    n = -1j * d / length
    return HalfPlane(complex(n), float(dot(a, n)))


def chord_halfplane(points: Sequence[complex], i, j, eps=EPS_GEOM):
    """Half-plane whose intersection with the unit disc is ``D(i, j)``.

    ``D(i, j)`` is bounded by the chord from ``points[i]`` to ``points[j]`` and
    the counterclockwise arc from ``points[j]`` back to ``points[i]``; that arc
    lies to the left of the directed chord. Indices are taken cyclically.
    """
    n = len(points)
    if i % n == j % n:
        raise DegenerateChord("chord endpoints share an index")
    a = complex(points[i % n])
    b = complex(points[j % n])
    if abs(b - a) <= eps:
        raise DegenerateChord(f"chord endpoints {i % n}, {j % n} coincide")
    return line_halfplane(a, b)


def _dedupe(points, eps):
    """Drop points within ``eps`` of an earlier kept point (grid-bucketed)."""
    out = []
    cells = {}
    size = max(eps, 1e-300)
    for p in points:
        cx, cy = int(np.floor(p.real / size)), int(np.floor(p.imag / size))
        near = (
            q
            for dx in (-1, 0, 1)
            for dy in (-1, 0, 1)
            for q in cells.get((cx + dx, cy + dy), ())
        )
        if any(abs(p - q) <= eps for q in near):
            continue
        cells.setdefault((cx, cy), []).append(p)
        out.append(p)
    return out


def _classify(hull, eps):
    if not hull:
        return ConvexPolygon.empty()
    if len(hull) == 1:
        return ConvexPolygon((hull[0],), POINT)
    if len(hull) >= 3 and polygon_area(hull) > EPS_AREA:
        return ConvexPolygon(tuple(hull), POLYGON)
    # flat: keep the two farthest points
    best = (0.0, hull[0], hull[0])
    for a in hull:
        for b in hull:
            if abs(a - b) > best[0]:
                best = (abs(a - b), a, b)
    diam, a, b = best
    if diam <= eps:
        return ConvexPolygon((hull[0],), POINT)
    a, b = sorted((a, b), key=lambda z: (z.real, z.imag))
    return ConvexPolygon((a, b), SEGMENT)


def convex_hull(points, eps=EPS_GEOM):
    """Counterclockwise convex hull (Andrew's monotone chain).

    Points closer than ``eps`` are merged and vertices within ``eps`` of the
    line through their neighbours are dropped.
    """
    pts = _dedupe([complex(p) for p in points], eps)
    if not pts:
        return ConvexPolygon.empty()
    pts.sort(key=lambda z: (z.real, z.imag))
    if len(pts) < 3:
        return _classify(pts, eps)

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2:
                o, a = chain[-2], chain[-1]
                base = abs(p - o)
                if cross(a - o, p - o) <= eps * max(base, eps):
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        hull = _dedupe(lower + upper, eps)
    return _classify(hull, eps)


def clip(poly: ConvexPolygon, hp: HalfPlane, eps=EPS_GEOM):
    """Intersect a convex polygon (of any kind) with a closed half-plane."""
    if poly.is_empty:
        return poly
    v = poly.vertices
    d = [hp.signed_distance(p) for p in v]
    if all(x <= eps for x in d):
        return poly
    if all(x > eps for x in d):
        return ConvexPolygon.empty()
    out = []
    n = len(v)
    for idx in range(n):
        p, q = v[idx], v[(idx + 1) % n]
        dp, dq = d[idx], d[(idx + 1) % n]
        if dp <= eps:
            out.append(p)
        if (dp <= eps) != (dq <= eps):
            t = min(max(dp / (dp - dq), 0.0), 1.0)
            out.append(p + t * (q - p))
    return convex_hull(out, eps)


def clip_all(poly, halfplanes, eps=EPS_GEOM):
    for hp in halfplanes:
        poly = clip(poly, hp, eps)
        if poly.is_empty:
            break
    return poly


def segment_distance(z, a, b):
    d = b - a
    L2 = dot(d, d)
    if L2 == 0:
        return abs(z - a)
    t = min(max(dot(z - a, d) / L2, 0.0), 1.0)
    return abs(z - (a + t * d))


def distance_to_boundary(poly, z):
    """Distance from ``z`` to the boundary of ``poly`` (the whole set for flat kinds)."""
    if poly.is_empty:
        raise EmptyRegion("empty polygon has no boundary")
    v = poly.vertices
    if poly.kind == POINT:
        return abs(z - v[0])
    if poly.kind == SEGMENT:
        return segment_distance(z, v[0], v[1])
    return min(segment_distance(z, a, b) for a, b in poly.edges())


def contains(poly: ConvexPolygon, z, tol=EPS_GEOM):
    """True when ``z`` lies within ``tol`` of ``poly`` (boundary inclusive)."""
    z = complex(z)
    if poly.is_empty:
        return False
    v = poly.vertices
    if poly.kind == POINT:
        return abs(z - v[0]) <= tol
    if poly.kind == SEGMENT:
        return segment_distance(z, v[0], v[1]) <= tol
    for a, b in poly.edges():
        if cross(b - a, z - a) / abs(b - a) < -tol:
            return False
    return True


def polygon_within(inner, outer, tol=EPS_GEOM):
    """Vertex-wise containment test ``inner <= outer``."""
    if inner.is_empty:
        return True
    return all(contains(outer, p, tol) for p in inner.vertices)


def same_polygon(p, q, tol=1e-8):
    """Compare kinds and vertex sets (unordered, matched within ``tol``)."""
    if p.kind != q.kind or len(p) != len(q):
        return False
    remaining = list(q.vertices)
    for a in p.vertices:
        dists = [abs(a - b) for b in remaining]
        j = int(np.argmin(dists))
        if dists[j] > tol:
            return False
        remaining.pop(j)
    return True


def intersect(a: ConvexPolygon, b: ConvexPolygon, eps=EPS_GEOM):
    """Intersection of two convex polygons of any kind."""
    if a.is_empty or b.is_empty:
        return ConvexPolygon.empty()
    if b.kind == POLYGON:
        return clip_all(a, b.halfplanes(), eps)
    if b.kind == POINT:
        p = b.vertices[0]
        return ConvexPolygon((p,), POINT) if contains(a, p, eps) else ConvexPolygon.empty()
    p, q = b.vertices
    u = (q - p) / abs(q - p)
    hps = [
        line_halfplane(p, q),
        line_halfplane(q, p),
        HalfPlane(complex(u), float(dot(q, u))),
        HalfPlane(complex(-u), float(dot(p, -u))),
    ]
    return clip_all(a, hps, eps)


def barycentric(tri, z, tol=EPS_GEOM):
    """Barycentric coordinates of ``z`` in the triangle ``tri``.

    Coordinates slightly below zero (``z`` within ``tol`` outside) are clamped
    and the triple renormalized to sum to one.
    """
    v1, v2, v3 = (complex(p) for p in tri)
    z = complex(z)
    det = cross(v2 - v1, v3 - v1)
    if abs(det) <= 2 * EPS_AREA:
        raise DegenerateTriangle("triangle has (near) zero area")
    t2 = cross(z - v1, v3 - v1) / det
    t3 = cross(v2 - v1, z - v1) / det
    t1 = 1.0 - t2 - t3
    t = np.array([t1, t2, t3])
    if t.min() < 0:
        tri_poly = convex_hull([v1, v2, v3])
        if not contains(tri_poly, z, tol):
            raise OutsideTriangle(f"point {z} lies outside the triangle")
    t = np.clip(t, 0.0, None)
    return tuple(float(x) for x in t / t.sum())


def segment_coordinates(a, b, z, tol=EPS_GEOM):
    """Weights ``(s, t)`` with ``s a + t b`` the closest point to ``z`` on ``[a, b]``."""
    if segment_distance(z, a, b) > tol:
        raise OutsideTriangle(f"point {z} is not on the segment")
    d = b - a
    L2 = dot(d, d)
    if L2 == 0:
        return 1.0, 0.0
    t = min(max(dot(z - a, d) / L2, 0.0), 1.0)
    return 1.0 - t, t


def segment_intersection(a1, a2, b1, b2, eps=EPS_GEOM):
    """Intersection point of segments ``[a1, a2]`` and ``[b1, b2]``, or ``None``."""
    a1, a2, b1, b2 = (complex(x) for x in (a1, a2, b1, b2))
    r = a2 - a1
    s = b2 - b1
    denom = cross(r, s)
    scale = max(abs(r) * abs(s), eps)
    if abs(denom) <= eps * scale:
        # parallel
        if abs(r) > 0:
            offset = abs(cross(r, b1 - a1)) / abs(r)
        else:
            offset = abs(b1 - a1) if abs(s) == 0 else abs(cross(s, a1 - b1)) / abs(s)
        if offset > eps:
            return None
        if abs(r) == 0 and abs(s) == 0:
            return a1 if abs(a1 - b1) <= eps else None
        u = r / abs(r) if abs(r) > 0 else s / abs(s)
        pa = sorted((dot(a1, u), dot(a2, u)))
        pb = sorted((dot(b1, u), dot(b2, u)))
        lo, hi = max(pa[0], pb[0]), min(pa[1], pb[1])
        if hi < lo - eps:
            return None
        if hi - lo <= eps:
            return a1 + (0.5 * (lo + hi) - dot(a1, u)) * u
        raise CollinearOverlap("segments overlap along a line")
    t = cross(b1 - a1, s) / denom
    w = cross(b1 - a1, r) / denom
    tt = eps / max(abs(r), eps)
    ww = eps / max(abs(s), eps)
    if -tt <= t <= 1 + tt and -ww <= w <= 1 + ww:
        return a1 + min(max(t, 0.0), 1.0) * r
    return None


def centroid(poly: ConvexPolygon):
    """Area centroid (polygon), midpoint (segment) or the point itself."""
    if poly.is_empty:
        raise EmptyRegion("centroid of an empty region")
    v = poly.vertices
    if poly.kind == POINT:
        return v[0]
    if poly.kind == SEGMENT:
        return 0.5 * (v[0] + v[1])
    origin = v[0]
    area = 0.0
    acc = 0j
    for i in range(1, len(v) - 1):
        a = cross(v[i] - origin, v[i + 1] - origin) / 2
        area += a
        acc += a * (origin + v[i] + v[i + 1]) / 3
    return acc / area


def fan_triangles(n):
    """Index triples ``(0, j, j + 1)`` triangulating a convex n-gon."""
    return [(0, j, j + 1) for j in range(1, n - 1)]


def convex_weights(vertices, z, tol=EPS_GEOM):
    """Convex weights over ``vertices`` (a convex chain in ccw order) reproducing ``z``.

    The polygon is fan-triangulated from its first vertex; the first fan
    triangle containing ``z`` supplies barycentric weights, all other weights
    are zero. Returns ``None`` if ``z`` is not in the hull.
    """
    v = [complex(p) for p in vertices]
    m = len(v)
    w = np.zeros(m)
    if m == 1:
        if abs(z - v[0]) > tol:
            return None
        w[0] = 1.0
        return w
    if m == 2:
        if segment_distance(z, v[0], v[1]) > tol:
            return None
        w[:] = segment_coordinates(v[0], v[1], z, tol)
        return w
    for a, b, c in fan_triangles(m):
        if abs(cross(v[b] - v[a], v[c] - v[a])) <= 2 * EPS_AREA:
            continue
        try:
            t = barycentric((v[a], v[b], v[c]), z, tol)
        except OutsideTriangle:
            continue
        w[[a, b, c]] = t
        return w
    # flat fan (all triangles degenerate): fall back to the extreme segment
    hull = convex_hull(v)
    if hull.kind == SEGMENT and contains(hull, z, tol):
        p, q = hull.vertices
        s, t = segment_coordinates(p, q, z, tol)
        i = int(np.argmin([abs(x - p) for x in v]))
        j = int(np.argmin([abs(x - q) for x in v]))
        w[i] += s
        w[j] += t
        return w
    return None


def unit_circle_polygon(n=1024, circumscribed=True):
    """Regular n-gon approximating the unit disc from outside (or inside)."""
    r = 1.0 / np.cos(np.pi / n) if circumscribed else 1.0
    ang = 2 * np.pi * np.arange(n) / n
    return convex_hull(r * np.exp(1j * ang))
