"""Rank-k compression codes: projections ``P`` with ``P U P = lam P``.

Coefficients are handled in the eigenbasis of the spectrum. A code with
coefficient matrix ``A`` (shape ``N x k``, orthonormal columns) has basis
``V @ A`` where ``V`` holds the eigenvectors, so sub-spectra produced by
:meth:`UnitarySpectrum.subset` yield bases in the ambient space directly.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.optimize

from . import geometry as geo
from .errors import (
    CoverageFailure,
    DegenerateSpectrum,
    DimensionMismatch,
    EmptyOmega,
    InconsistentLambda,
    NotDivisible,
    NotInOmega,
    NotOnBoundary,
    OutsideTriangle,
    SolverFailed,
    Unsupported,
)
from .numerics import dagger
from .omega import omega_k
from .spectrum import UnitarySpectrum

RESIDUAL_TOL = 1e-9
SIGMA_TOL = 1e-8
ZERO_WEIGHT = 1e-12


@dataclass
class CompressionCode:
    """A rank-k code subspace on which ``U`` compresses to the scalar ``lam``."""

    lam: complex
    basis: np.ndarray
    projection: np.ndarray
    residual: float
    strategy: str
    details: dict = field(default_factory=dict)

    @property
    def k(self):
        return self.basis.shape[1]

    @property
    def dim(self):
        return self.basis.shape[0]

    def projection_defects(self):
        return projection_defects(self.projection, self.k)


def projection_defects(P, k=None):
    """``(||P^2 - P||, ||P - P^dagger||, |tr P - k|)`` in Frobenius norm."""
    P = np.asarray(P, dtype=complex)
    idem = float(np.linalg.norm(P @ P - P))
    herm = float(np.linalg.norm(P - dagger(P)))
    tr = float(abs(np.trace(P) - (k if k is not None else round(np.trace(P).real))))
    return idem, herm, tr


def compression_residual(U, P, lam):
    return float(np.linalg.norm(P @ U @ P - lam * P))


def make_code(spec: UnitarySpectrum, coeffs, lam, strategy, **details):
    """Assemble a code from eigenbasis coefficients (columns are the code vectors)."""
    A = np.asarray(coeffs, dtype=complex)
    basis = spec.eigenvectors @ A
    P = basis @ dagger(basis)
    # residual in the eigenbasis: || A (A^+ D A - lam I) A^+ ||
    D = spec.eigenvalues
    G = dagger(A) @ (D[:, None] * A) - lam * np.eye(A.shape[1])
    residual = float(np.linalg.norm(A @ G @ dagger(A)))
    return CompressionCode(complex(lam), basis, P, residual, strategy, dict(details))


def verify_compression(U, code: CompressionCode):
    """Recompute ``||P U P - lam P||_F`` against the matrix ``U``."""
    U = np.asarray(U, dtype=complex)
    P = code.projection
    if U.shape != P.shape:
        raise DimensionMismatch(f"U is {U.shape} but P is {P.shape}")
    return compression_residual(U, P, code.lam)


# --------------------------------------------------------------------------
# disjoint convex combinations


@dataclass(frozen=True)
class DisjointConvexData:
    """``k`` disjoint index sets with convex weights over each.

    ``subsets[i]`` indexes the spectrum; ``weights[i]`` has the same length.
    """

    subsets: tuple
    weights: tuple

    def __post_init__(self):
        seen = set()
        for s, w in zip(self.subsets, self.weights):
            if len(s) != len(w):
                raise ValueError("each subset needs one weight per index")
            if seen.intersection(s):
                raise ValueError("subsets must be pairwise disjoint")
            seen.update(s)
            w = np.asarray(w, dtype=float)
            if w.min() < -1e-12 or abs(w.sum() - 1) > 1e-9:
                raise ValueError("weights must be a convex combination")

    @property
    def k(self):
        return len(self.subsets)

    def values(self, spec):
        """The convex-combination value of each subset."""
        pts = spec.eigenvalues
        return [complex(np.dot(w, pts[list(s)])) for s, w in zip(self.subsets, self.weights)]

    def coefficient_matrix(self, n):
        """``k x n`` matrix with ``sqrt(t_ij)`` on the support of subset ``i``."""
        S = np.zeros((self.k, n))
        for i, (s, w) in enumerate(zip(self.subsets, self.weights)):
            S[i, list(s)] = np.sqrt(np.clip(w, 0.0, None))
        return S


def _common_lambda(spec, data, tol):
    vals = data.values(spec)
    lam = complex(np.mean(vals))
    if max(abs(v - lam) for v in vals) > tol:
        raise InconsistentLambda(f"subset values disagree: {vals}")
    return lam


def projection_from_disjoint(spec: UnitarySpectrum, data: DisjointConvexData, tol=1e-9):
    """Code with ``phi_i = sum_{j in S_i} sqrt(t_ij) psi_j``."""
    lam = _common_lambda(spec, data, tol)
    S = data.coefficient_matrix(spec.N)
    return make_code(spec, S.T, lam, "disjoint", subsets=[list(s) for s in data.subsets])


def fourier_sigma_k(spec: UnitarySpectrum, data: DisjointConvexData, tol=1e-9):
    """Code with coefficient rows ``R = F S`` for the ``k x k`` Fourier unitary ``F``.

    Every code vector then has coefficient moduli ``|s_mj| / sqrt(k)``.
    """
    lam = _common_lambda(spec, data, tol)
    k = data.k
    S = data.coefficient_matrix(spec.N)
    idx = np.arange(k)
    F = np.exp(2j * np.pi * np.outer(idx, idx) / k) / np.sqrt(k)
    R = F @ S
    return make_code(spec, R.T, lam, "fourier", subsets=[list(s) for s in data.subsets])


def _require_distinct(spec):
    if spec.degenerate:
        raise DegenerateSpectrum("construction requires distinct eigenvalues")


def _require_in_omega(spec, k, lam, tol):
    res = omega_k(spec, k)
    if not geo.contains(res.polygon, lam, tol):
        raise NotInOmega(f"lambda={lam} is not in Omega_{k}")
    return res


def _triangle_weights(pts, tri, lam, tol):
    try:
        return geo.barycentric([pts[t] for t in tri], lam, tol)
    except (OutsideTriangle, geo.DegenerateTriangle):
        return None


def _hull_fan(pts, idx, lam, tol):
    """Rank-1 data from the fan triangulation of ``conv(pts[idx])``."""
    w = geo.convex_weights([pts[i] for i in idx], lam, tol)
    if w is None:
        return None
    keep = [(i, x) for i, x in zip(idx, w) if x > 0]
    return tuple(i for i, _ in keep), tuple(x for _, x in keep)


def _cover_recursive(pts, idx, k, lam, tol, exhaustive):
    """Disjoint triangles inside ``idx`` containing ``lam``; ``None`` when none found."""
    n = len(idx)
    if k == 1:
        got = _hull_fan(pts, idx, lam, tol)
        return None if got is None else [got]
    if exhaustive:
        cands = [
            (a, b, c)
            for a in range(n)
            for b in range(a + 1, n)
            for c in range(b + 1, n)
        ]
    else:
        # base vertex fixed at the first label: T(1, k+1+s, 2k+1+s)
        cands = [(0, k + s, 2 * k + s) for s in range(n - 3 * k + 1)]
    for a, b, c in cands:
        tri = (idx[a], idx[b], idx[c])
        t = _triangle_weights(pts, tri, lam, tol)
        if t is None:
            continue
        rest = [j for j in idx if j not in tri]
        sub = _cover_recursive(pts, rest, k - 1, lam, tol, exhaustive)
        if sub is not None:
            return [(tri, t)] + sub
        if not exhaustive:
            # first containing triangle in the listed order is the algorithm's choice
            return None
    return None


def disjoint_triangle_cover(spec: UnitarySpectrum, k, lam, tol=geo.EPS_GEOM):
    """``k`` index-disjoint eigentriangles each containing ``lam`` (``N >= 3k``).

    Follows the recursion with base vertex 1: pick the first triangle
    ``T(1, b, b + k)`` containing ``lam``, drop its indices, relabel and recurse
    with ``k - 1``. On failure the containment tolerance is widened tenfold,
    then a backtracking search over all triangles is tried.
    """
    N = spec.N
    if N < 3 * k:
        raise ValueError(f"triangle cover needs N >= 3k (N={N}, k={k})")
    _require_distinct(spec)
    _require_in_omega(spec, k, lam, tol)
    pts = spec.points
    idx = list(range(N))
    attempts = [(tol, False, "base_order"), (10 * tol, False, "widened"), (10 * tol, True, "exhaustive")]
    for t, exhaustive, _label in attempts:
        cover = _cover_recursive(pts, idx, k, lam, t, exhaustive)
        if cover is not None:
            subsets = tuple(tuple(s) for s, _ in cover)
            weights = tuple(tuple(w) for _, w in cover)
            return DisjointConvexData(subsets, weights)
    raise CoverageFailure(f"no disjoint triangle cover found for lambda={lam}")


def code_k_divides_N(spec: UnitarySpectrum, k, lam, tol=geo.EPS_GEOM):
    """Code from the residue classes ``S_i = {i, i + k, ...}`` when ``k | N``."""
    N = spec.N
    if N % k:
        raise NotDivisible(f"k={k} does not divide N={N}")
    pts = spec.points
    subsets, weights = [], []
    for i in range(k):
        s = list(range(i, N, k))
        w = geo.convex_weights([pts[j] for j in s], lam, tol)
        if w is None:
            raise NotInOmega(f"lambda={lam} is outside the hull of class {i}")
        subsets.append(tuple(s))
        weights.append(tuple(w))
    data = DisjointConvexData(tuple(subsets), tuple(weights))
    code = projection_from_disjoint(spec, data, tol=10 * tol)
    code.strategy = "k_divides_N"
    return code


# --------------------------------------------------------------------------
# the Sigma_2 machinery for five eigenvalues


@dataclass(frozen=True)
class SigmaVector:
    """Nonzero ``p`` orthogonal to ``1``, ``sigma`` and ``conj(sigma)``."""

    p: np.ndarray

    def orthogonality_sums(self, points):
        """``(p,1)``, ``(p,sigma)``, ``(p,conj sigma)`` with ``(x,y) = sum x conj(y)``."""
        sig = np.asarray(points, dtype=complex)
        p = self.p
        return (complex(p.sum()), complex(np.dot(p, sig.conj())), complex(np.dot(p, sig)))

    def value(self, points):
        """``f(p) = sum |p_j| lam_j / sum |p_j|``."""
        w = np.abs(self.p)
        return complex(np.dot(w, points) / w.sum())

    def coefficients(self):
        """``2 x N`` rows ``alpha_1j = sqrt(|p_j|/s)``, ``alpha_2j = alpha_1j conj(p_j)/|p_j|``."""
        w = np.abs(self.p)
        s = w.sum()
        a1 = np.sqrt(w / s)
        phase = np.ones_like(self.p)
        nz = w > ZERO_WEIGHT * s
        phase[nz] = np.conj(self.p[nz]) / w[nz]
        a2 = np.where(nz, a1 * phase, 0.0)
        a1 = np.where(nz, a1, 0.0)
        return np.vstack([a1, a2])


def sigma_null_space(points):
    """Orthonormal basis (two columns) of ``{1, sigma, conj(sigma)}^perp`` for N = 5."""
    sig = np.asarray(points, dtype=complex)
    M = np.vstack([np.ones_like(sig), sig.conj(), sig])
    # rows of M are the conjugates of the vectors p must be orthogonal to
    Q, R, _ = scipy.linalg.qr(dagger(M), pivoting=True)
    return Q[:, 3:]


def _f_values(W, points):
    return (W @ points) / W.sum(axis=-1)


def _family(b1, b2, u, v):
    return np.cos(u)[..., None] * b1 + (np.sin(u) * np.exp(1j * v))[..., None] * b2


def _newton_polish(b1, b2, points, lam, x0, iters=30):
    """Solve ``f(p(u, v)) = lam`` by Newton's method from ``x0``."""
    u, v = x0
    best = (np.inf, x0)
    for _ in range(iters):
        p = np.cos(u) * b1 + np.sin(u) * np.exp(1j * v) * b2
        w = np.abs(p)
        s = w.sum()
        f = np.dot(w, points) / s
        r = f - lam
        err = abs(r)
        if err < best[0]:
            best = (err, (u, v))
        if err < 1e-15 or np.any(w < 1e-14 * s):
            break
        dp_du = -np.sin(u) * b1 + np.cos(u) * np.exp(1j * v) * b2
        dp_dv = 1j * np.sin(u) * np.exp(1j * v) * b2
        cols = []
        for dp in (dp_du, dp_dv):
            dw = np.real(np.conj(p) * dp) / w
            df = (np.dot(dw, points) - f * dw.sum()) / s
            cols.append([df.real, df.imag])
        J = np.array(cols).T
        try:
            step = np.linalg.solve(J, [-r.real, -r.imag])
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        u, v = u + step[0], v + step[1]
    return best


def _sigma_search(points, lam, grid, refine=8, maxiter=400):
    B = sigma_null_space(points)
    b1, b2 = B[:, 0], B[:, 1]
    us = np.linspace(0, np.pi / 2, grid)
    vs = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    U, V = np.meshgrid(us, vs, indexing="ij")
    P = _family(b1, b2, U, V)
    F = _f_values(np.abs(P), points)
    obj = np.abs(F - lam) ** 2
    flat = np.argsort(obj, axis=None, kind="stable")[:refine]

    def objective(x):
        p = np.cos(x[0]) * b1 + np.sin(x[0]) * np.exp(1j * x[1]) * b2
        w = np.abs(p)
        return abs(np.dot(w, points) / w.sum() - lam) ** 2

    best = (np.inf, None)
    for cell in flat:
        i, j = np.unravel_index(cell, obj.shape)
        x0 = np.array([us[i], vs[j]])
        sol = scipy.optimize.minimize(
            objective, x0, method="Nelder-Mead",
            options={"maxiter": maxiter, "xatol": 1e-14, "fatol": 1e-30},
        )
        err, x = _newton_polish(b1, b2, points, lam, sol.x)
        if err < best[0]:
            best = (err, x)
        if err <= 1e-12:
            break
    err, (u, v) = best
    p = np.cos(u) * b1 + np.sin(u) * np.exp(1j * v) * b2
    return err, p


def _sigma2_boundary(points, lam, tol):
    """``p = t - s`` from a diagonal and its complementary eigentriangle."""
    n = len(points)
    for i in range(n):
        a, c = points[i], points[(i + 2) % n]
        if geo.segment_distance(lam, a, c) > tol:
            continue
        tri = [(i + 1) % n, (i + 3) % n, (i + 4) % n]
        s = _triangle_weights(points, tri, lam, tol)
        if s is None:
            continue
        st, tt = geo.segment_coordinates(a, c, lam, tol)
        p = np.zeros(n, dtype=complex)
        p[i] += st
        p[(i + 2) % n] += tt
        p[tri] -= s
        return p
    return None


def sigma2_solve(spec: UnitarySpectrum, lam, tol=geo.EPS_GEOM, grids=(128, 512)):
    """Find ``p`` with ``f(p) = lam`` and build the rank-2 code (five eigenvalues).

    Boundary points of ``Omega_2`` are handled exactly through a segment and
    its complementary eigentriangle. Interior points are found by a grid
    search over the normalized null-space family, refined by Nelder-Mead
    and a final Newton polish; the grid is enlarged if the first pass fails.
    """
    if spec.N != 5:
        raise ValueError("sigma2_solve needs exactly five eigenvalues")
    _require_distinct(spec)
    res = _require_in_omega(spec, 2, lam, tol)
    points = spec.eigenvalues
    pts = spec.points
    schedule = None
    p = None
    if res.polygon.kind != geo.POLYGON or geo.distance_to_boundary(res.polygon, lam) <= tol:
        p = _sigma2_boundary(pts, lam, 10 * tol)
        if p is not None:
            schedule = "boundary"
    if p is None:
        for n_grid, label in zip(grids, ("first", "escalated")):
            err, cand = _sigma_search(points, lam, n_grid)
            if err <= 1e-10:
                p, schedule = cand, label
                break
        else:
            raise SolverFailed(f"sigma2 search stalled at |f(p) - lambda| = {err:.3e}")
    sv = SigmaVector(np.asarray(p, dtype=complex))
    alpha = sv.coefficients()
    code = make_code(spec, alpha.T, lam, "sigma2", schedule=schedule, p=sv.p)
    return sv, code


# --------------------------------------------------------------------------
# compositions


def _stack(spec, codes, lam, strategy, **details):
    basis = np.hstack([c.basis for c in codes])
    # express in the eigenbasis of ``spec``
    A = dagger(spec.eigenvectors) @ basis
    return make_code(spec, A, lam, strategy, **details)


def code_5m_2m(spec: UnitarySpectrum, lam, tol=geo.EPS_GEOM):
    """Direct sum of rank-2 codes over the five-point classes ``{j, j+m, ..., j+4m}``."""
    N = spec.N
    if N % 5:
        raise NotDivisible(f"N={N} is not a multiple of 5")
    m = N // 5
    _require_distinct(spec)
    _require_in_omega(spec, 2 * m, lam, tol)
    if m == 1:
        _, code = sigma2_solve(spec, lam, tol)
        code.strategy = "5m_2m"
        return code
    parts = []
    for j in range(m):
        sub = spec.subset(range(j, N, m))
        _, c = sigma2_solve(sub, lam, 10 * tol)
        parts.append(c)
    return _stack(spec, parts, lam, "5m_2m", schedules=[c.details.get("schedule") for c in parts])


def _segment_block(pts, i, j, lam, tol):
    s, t = geo.segment_coordinates(pts[i], pts[j], lam, tol)
    return (i, j), (s, t)


def _rank1(spec_sub_pts, idx, lam, tol):
    got = _hull_fan(spec_sub_pts, idx, lam, tol)
    if got is None:
        raise NotInOmega(f"lambda={lam} is outside the hull")
    return got


def _three_k_minus_1(spec, idx, K, lam, tol):
    """Blocks (coefficient columns over ``spec``) for ``|idx| = 3K - 1``."""
    pts = spec.points
    n = len(idx)
    if K == 1:
        s, w = _rank1(pts, idx, lam, tol)
        col = np.zeros(spec.N, dtype=complex)
        col[list(s)] = np.sqrt(w)
        return [col[:, None]], ["segment"]
    if K == 2:
        sub = spec.subset(idx)
        _, c = sigma2_solve(sub, lam, tol)
        return [dagger(spec.eigenvectors) @ c.basis], [c.details.get("schedule")]
    last_error = None
    for a in (0, K + 1):
        # wedge test: lam in D(a+K-1, a+2K) lets us peel T(a, a+K, a+2K-1)
        hp = geo.chord_halfplane([pts[j] for j in idx], a + K - 1, a + 2 * K)
        if not hp.contains(lam, tol):
            continue
        tri = tuple(idx[(a + d) % n] for d in (0, K, 2 * K - 1))
        t = _triangle_weights(pts, tri, lam, 10 * tol)
        if t is None:
            continue
        rest = [j for j in idx if j not in tri]
        try:
            blocks, tags = _three_k_minus_1(spec, rest, K - 1, lam, tol)
        except (NotInOmega, SolverFailed) as exc:
            last_error = exc
            continue
        col = np.zeros(spec.N, dtype=complex)
        col[list(tri)] = np.sqrt(t)
        return [col[:, None]] + blocks, ["triangle"] + tags
    raise last_error or NotInOmega(f"lambda={lam} lies in neither wedge")


def code_3k_minus_1(spec: UnitarySpectrum, k, lam, tol=geo.EPS_GEOM):
    """Code for ``N = 3k - 1`` by peeling eigentriangles down to the five-point case."""
    N = spec.N
    if N != 3 * k - 1:
        raise ValueError(f"need N = 3k - 1 (N={N}, k={k})")
    _require_distinct(spec)
    _require_in_omega(spec, k, lam, tol)
    blocks, tags = _three_k_minus_1(spec, list(range(N)), k, lam, tol)
    A = np.hstack(blocks)
    return make_code(spec, A, lam, "3k_minus_1", blocks=tags)


def boundary_code_7_3(spec: UnitarySpectrum, lam, tol=geo.EPS_GEOM):
    """Rank-3 code for ``lam`` on the boundary of ``Omega_3`` with seven eigenvalues.

    ``lam`` on ``[lam_i, lam_{i+3}]`` (smallest such ``i``) gives a rank-1
    block; the other five eigenvalues supply a rank-2 block.
    """
    if spec.N != 7:
        raise ValueError("boundary_code_7_3 needs exactly seven eigenvalues")
    _require_distinct(spec)
    res = _require_in_omega(spec, 3, lam, tol)
    poly = res.polygon
    if poly.kind == geo.POLYGON and geo.distance_to_boundary(poly, lam) > tol:
        raise NotOnBoundary("interior points of Omega_3 for N = 7 have no known construction")
    pts = spec.points
    for i in range(7):
        j = (i + 3) % 7
        if geo.segment_distance(lam, pts[i], pts[j]) > 10 * tol:
            continue
        s, t = geo.segment_coordinates(pts[i], pts[j], lam, 10 * tol)
        col = np.zeros(7, dtype=complex)
        col[i], col[j] = np.sqrt(s), np.sqrt(t)
        rest = [x for x in range(7) if x not in (i, j)]
        _, c = sigma2_solve(spec.subset(rest), lam, 10 * tol)
        A = np.hstack([col[:, None], dagger(spec.eigenvectors) @ c.basis])
        return make_code(spec, A, lam, "boundary_7_3", segment=(i, j))
    raise NotOnBoundary(f"lambda={lam} lies on no segment [lam_i, lam_(i+3)]")


def construct_code(spec: UnitarySpectrum, k, lam: Optional[complex] = None, tol=geo.EPS_GEOM):
    """Pick a construction for ``(N, k)`` and build a code at ``lam``.

    The default ``lam`` is the area centroid of ``Omega_k``. Strategies in
    order: triangle cover (``N >= 3k``), residue classes (``k | N``), the
    ``3k - 1`` recursion, the ``(5m, 2m)`` composition, and the boundary of
    ``Omega_3`` for ``N = 7``.
    """
    N = spec.N
    if k < 1:
        raise ValueError("k must be positive")
    if k > N:
        raise EmptyOmega(f"Omega_{k} is empty for N={N}")
    res = omega_k(spec, k)
    if res.empty:
        raise EmptyOmega(f"Omega_{k} is empty for N={N} ({res.classification.value})")
    if lam is None:
        lam = geo.centroid(res.polygon)
    lam = complex(lam)
    if not geo.contains(res.polygon, lam, tol):
        raise NotInOmega(f"lambda={lam} is not in Omega_{k}")
    if spec.degenerate:
        raise DegenerateSpectrum("code constructions require distinct eigenvalues")

    if N >= 3 * k:
        data = disjoint_triangle_cover(spec, k, lam, tol)
        code = projection_from_disjoint(spec, data, tol=10 * tol)
        code.strategy = "disjoint_triangles"
        return code
    if N % k == 0:
        try:
            return code_k_divides_N(spec, k, lam, tol)
        except NotInOmega:
            pass
    if N == 3 * k - 1:
        if k == 2:
            _, code = sigma2_solve(spec, lam, tol)
            return code
        return code_3k_minus_1(spec, k, lam, tol)
    if N % 5 == 0 and k == 2 * (N // 5):
        return code_5m_2m(spec, lam, tol)
    if N == 7 and k == 3:
        try:
            return boundary_code_7_3(spec, lam, tol)
        except NotOnBoundary:
            pass
        raise Unsupported(
            "(N, k) = (7, 3) with lambda in the interior of Omega_3 is an unsettled case; "
            "only boundary points are constructed"
        )
    raise Unsupported(f"no implemented construction covers (N, k) = ({N}, {k})")
