"""Polygon ``Omega_k(U)`` of a unitary spectrum, with emptiness classification.

``Omega_k`` is the intersection of the convex hulls of all ``(N - k + 1)``-point
subsets of the spectrum. For points on the unit circle it equals the
intersection of the ``N`` cap regions ``D(i, i + k)``, which is how
:func:`omega_k` computes it. :func:`omega_k_bruteforce` evaluates the
definition directly and serves as the test oracle.
"""
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import geometry as geo
from .errors import DegenerateChord, HypothesisNotMet, InvalidK, TooLarge
from .spectrum import UnitarySpectrum, from_angles


class Classification(str, Enum):
    EMPTY_BY_DIMENSION = "EmptyByDimension"
    SINGLETON_CHORD_MEET = "SingletonChordMeet"
    EMPTY_CHORDS_MISS = "EmptyChordsMiss"
    NONEMPTY_GUARANTEED = "NonemptyGuaranteed"
    NONEMPTY_COMPUTED = "NonemptyComputed"
    EMPTY_COMPUTED = "EmptyComputed"

    @property
    def empty(self):
        return self in (
            Classification.EMPTY_BY_DIMENSION,
            Classification.EMPTY_CHORDS_MISS,
            Classification.EMPTY_COMPUTED,
        )


class Apriori(str, Enum):
    ALWAYS_EMPTY = "AlwaysEmpty"
    SINGLETON_OR_EMPTY = "SingletonOrEmpty"
    DEPENDS_ON_SPECTRUM = "DependsOnSpectrum"
    ALWAYS_NONEMPTY = "AlwaysNonempty"


@dataclass(frozen=True)
class OmegaResult:
    polygon: geo.ConvexPolygon
    k: int
    classification: Classification
    certificates: list = field(default_factory=list)

    @property
    def empty(self):
        return self.polygon.is_empty


def classify(N, k):
    """A-priori emptiness class of ``Omega_k`` for ``N`` distinct eigenvalues."""
    if N < 1 or k < 1:
        raise InvalidK("N and k must be positive")
    if k == 1:
        return Apriori.ALWAYS_NONEMPTY
    if N < 2 * k:
        return Apriori.ALWAYS_EMPTY
    if N == 2 * k:
        return Apriori.SINGLETON_OR_EMPTY
    if N >= 3 * k - 2:
        return Apriori.ALWAYS_NONEMPTY
    return Apriori.DEPENDS_ON_SPECTRUM


def chord_label(i, j, n):
    """Human-readable 1-based label ``D(i,j,U)`` for 0-based indices."""
    return f"D({i % n + 1},{j % n + 1},U)"


def _arc(spec, i, steps):
    """Counterclockwise angle swept from ``lam_i`` over ``steps`` consecutive gaps."""
    t = spec.thetas
    gaps = np.diff(np.append(t, t[0] + 2 * math.pi))
    return float(sum(gaps[(i + s) % spec.N] for s in range(steps)))


def cap_halfplanes(spec: UnitarySpectrum, k, eps=geo.EPS_GEOM):
    """Half-planes ``(i, hp)`` cutting out ``D(i, i + k)``; degenerate caps omitted.

    When ``lam_i`` and ``lam_{i+k}`` coincide (repeated phases) the cap has no
    chord. If the labels between them cover no arc, the cap is the whole disc;
    if they wrap the full circle, every remaining eigenvalue equals ``lam_i``
    and the cap is that point (see :func:`pinned_points`).
    """
    pts = spec.points
    out = []
    for i in range(spec.N):
        try:
            out.append((i, geo.chord_halfplane(pts, i, i + k, eps)))
        except DegenerateChord:
            continue
    return out


def pinned_points(spec: UnitarySpectrum, k, eps=geo.EPS_GEOM):
    """Eigenvalues ``lam_i`` whose cap ``D(i, i + k)`` shrinks to the point itself."""
    pts = spec.points
    out = []
    for i in range(spec.N):
        if abs(pts[i] - pts[(i + k) % spec.N]) > eps:
            continue
        if _arc(spec, i, k) > math.pi:
            out.append(pts[i])
    return out


def _chord_meet(spec, k, eps):
    """Common point of the ``k`` long diagonals ``[lam_j, lam_{j+k}]`` when ``N = 2k``."""
    pts = spec.points
    chords = [(pts[j], pts[(j + k) % spec.N]) for j in range(k)]
    meets = []
    for x, y in itertools.combinations(range(k), 2):
        p = geo.segment_intersection(*chords[x], *chords[y], eps=eps)
        if p is None:
            return None, [{"type": "chords_miss", "chords": [[x + 1, x + k + 1], [y + 1, y + k + 1]]}]
        meets.append(p)
    if not meets:
        return None, []
    center = complex(np.mean(meets))
    if max(abs(p - center) for p in meets) > 10 * eps:
        return None, [{"type": "chords_not_concurrent", "spread": float(max(abs(p - center) for p in meets))}]
    return center, [{"type": "chord_meet", "point": center}]


def triple_intersection_empty(spec, k, triple, eps=geo.EPS_GEOM):
    """Whether ``D(a,a+k) & D(b,b+k) & D(c,c+k)`` is empty (inside the closed disc).

    The disc is replaced by a circumscribed 1024-gon, so an empty answer is a
    certificate for the true caps.
    """
    pts = spec.points
    region = _DISC
    for a in triple:
        region = geo.clip(region, geo.chord_halfplane(pts, a, a + k, eps), eps)
        if region.is_empty:
            return True
    return False


_DISC = geo.unit_circle_polygon(1024, circumscribed=True)


def find_empty_triple(spec, k, eps=geo.EPS_GEOM):
    """First index triple (lexicographic) whose three caps do not meet."""
    for triple in itertools.combinations(range(spec.N), 3):
        try:
            if triple_intersection_empty(spec, k, triple, eps):
                return triple
        except DegenerateChord:
            continue
    return None


def omega_k(spec: UnitarySpectrum, k, eps=geo.EPS_GEOM):
    """Compute ``Omega_k`` by clipping ``conv(spec)`` with the caps ``D(i, i + k)``."""
    N = spec.N
    if not 1 <= k <= N:
        raise InvalidK(f"k={k} must satisfy 1 <= k <= N={N}")
    hull = geo.convex_hull(spec.points, eps)
    guaranteed = N >= 3 * k - 2

    if k == 1:
        return OmegaResult(hull, k, Classification.NONEMPTY_GUARANTEED)

    if not spec.degenerate:
        if N < 2 * k:
            return OmegaResult(geo.ConvexPolygon.empty(), k, Classification.EMPTY_BY_DIMENSION)
        if N == 2 * k:
            point, certs = _chord_meet(spec, k, eps)
            if point is None:
                return OmegaResult(geo.ConvexPolygon.empty(), k, Classification.EMPTY_CHORDS_MISS, certs)
            poly = geo.ConvexPolygon((point,), geo.POINT)
            return OmegaResult(poly, k, Classification.SINGLETON_CHORD_MEET, certs)

    poly = geo.clip_all(hull, [hp for _, hp in cap_halfplanes(spec, k, eps)], eps)
    for pin in pinned_points(spec, k, eps):
        poly = geo.intersect(poly, geo.ConvexPolygon((pin,), geo.POINT), eps)
    if poly.is_empty:
        certs = []
        triple = find_empty_triple(spec, k, eps)
        if triple is not None:
            certs.append({
                "type": "empty_triple",
                "chords": [[a + 1, (a + k) % N + 1] for a in triple],
                "labels": [chord_label(a, a + k, N) for a in triple],
            })
        return OmegaResult(poly, k, Classification.EMPTY_COMPUTED, certs)
    tag = Classification.NONEMPTY_GUARANTEED if guaranteed else Classification.NONEMPTY_COMPUTED
    return OmegaResult(poly, k, tag)


def omega_k_bruteforce(spec: UnitarySpectrum, k, eps=geo.EPS_GEOM, limit=10**6):
    """Intersect ``conv(Gamma)`` over every ``(N - k + 1)``-subset ``Gamma``."""
    N = spec.N
    if not 1 <= k <= N:
        raise InvalidK(f"k={k} must satisfy 1 <= k <= N={N}")
    size = N - k + 1
    if math.comb(N, size) > limit:
        raise TooLarge(f"C({N},{size}) subsets exceed the limit {limit}")
    pts = spec.points
    region = None
    for subset in itertools.combinations(range(N), size):
        hull = geo.convex_hull([pts[j] for j in subset], eps)
        region = hull if region is None else geo.intersect(region, hull, eps)
        if region.is_empty:
            break
    return region


def ensure_k(spec, k):
    if not 1 <= k <= spec.N:
        raise InvalidK(f"k={k} must satisfy 1 <= k <= N={spec.N}")


def drop_index(spec, j):
    """Spectrum with eigenvalue ``j`` removed."""
    return spec.subset([i for i in range(spec.N) if i != j])


def grid_points(poly, resolution=64):
    """Points of a bounding-box grid lying in ``poly`` (samples flat kinds directly)."""
    if poly.is_empty:
        return []
    v = poly.vertices
    if poly.kind == geo.POINT:
        return [v[0]]
    if poly.kind == geo.SEGMENT:
        return [v[0] + t * (v[1] - v[0]) for t in np.linspace(0, 1, resolution)]
    xs = [p.real for p in v]
    ys = [p.imag for p in v]
    out = []
    for x in np.linspace(min(xs), max(xs), resolution):
        for y in np.linspace(min(ys), max(ys), resolution):
            z = complex(x, y)
            if geo.contains(poly, z, 0.0):
                out.append(z)
    return out


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    checked: int
    witness: object = None

    def __bool__(self):
        return self.passed


def union_decomposition_check(spec: UnitarySpectrum, k, resolution=64, eps=geo.EPS_GEOM):
    """Grid check that ``Omega_k(V)`` is the union of the leave-one-out ``Omega_k(V_j)``.

    Requires distinct phases and ``Omega_{k+1}(V)`` nonempty; raises
    :class:`HypothesisNotMet` otherwise.
    """
    if spec.degenerate:
        raise HypothesisNotMet("eigenvalues must be distinct")
    if k + 1 > spec.N or omega_k(spec, k + 1, eps).empty:
        raise HypothesisNotMet(f"Omega_{k + 1} is empty")
    whole = omega_k(spec, k, eps).polygon
    parts = []
    for j in range(spec.N):
        sub = drop_index(spec, j)
        parts.append(omega_k(sub, k, eps).polygon if k <= sub.N else geo.ConvexPolygon.empty())
    samples = grid_points(whole, resolution) + list(whole.vertices)
    for z in samples:
        if not any(geo.contains(p, z, 10 * eps) for p in parts):
            return CheckResult(False, len(samples), z)
    # the union must also stay inside the whole
    for p in parts:
        if not geo.polygon_within(p, whole, 10 * eps):
            return CheckResult(False, len(samples), p)
    return CheckResult(True, len(samples))


def is_sub_spectrum(spec, spec_super, tol=1e-9):
    """Every phase of ``spec`` appears (with multiplicity) in ``spec_super``."""
    pool = list(spec_super.points)
    for z in spec.points:
        d = [abs(z - w) for w in pool]
        if not d:
            return False
        j = int(np.argmin(d))
        if d[j] > tol:
            return False
        pool.pop(j)
    return True


def monotonicity_checks(spec, spec_super, k, eps=geo.EPS_GEOM):
    """Check ``Omega_{k+1}(U) <= Omega_k(U)`` and ``Omega_k(U) <= Omega_k(V)``.

    ``spec_super`` must contain the phases of ``spec``; pass ``None`` to run
    only the rank-monotonicity leg.
    """
    inner = omega_k(spec, k, eps).polygon
    if k + 1 <= spec.N:
        nxt = omega_k(spec, k + 1, eps).polygon
        if not geo.polygon_within(nxt, inner, 10 * eps):
            return False
    if spec_super is not None:
        if not is_sub_spectrum(spec, spec_super):
            raise HypothesisNotMet("spec is not contained in spec_super")
        if k <= spec_super.N:
            outer = omega_k(spec_super, k, eps).polygon
            if not geo.polygon_within(inner, outer, 10 * eps):
                return False
    return True


def chain_containment(spec, eps=geo.EPS_GEOM):
    """``Omega_N <= ... <= Omega_2 <= Omega_1`` checked vertex-wise."""
    polys = [omega_k(spec, k, eps).polygon for k in range(1, spec.N + 1)]
    return all(geo.polygon_within(polys[i + 1], polys[i], 10 * eps) for i in range(len(polys) - 1))


def clustered_spectrum(k, spread_deg=6.0):
    """``3(k - 1)`` phases grouped counterclockwise of each cube root of unity.

    Each cube root gets ``k - 1`` points at offsets ``spread, 2 spread, ...``
    degrees; ``Omega_k`` of the result is empty.
    """
    angles = [120.0 * r + spread_deg * (i + 1) for r in range(3) for i in range(k - 1)]
    return from_angles(angles, unit="degrees")
