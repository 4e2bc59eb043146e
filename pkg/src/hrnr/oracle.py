"""Numerical search for rank-k compressions, used to probe ``Lambda_k``.

The search minimizes ``||X^dagger M X||^2 + ||X^dagger X - I||^2`` over
complex ``N x k`` matrices ``X`` with ``M = diag(lam_j) - lam I`` in the
eigenbasis, then orthonormalizes. A ``NotFound`` verdict is one-sided: the
search can miss solutions that exist.
"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.optimize

from . import geometry as geo
from .codes import CompressionCode, make_code, verify_compression
from .errors import TooLarge
from .numerics import dagger
from .omega import omega_k
from .spectrum import random_spectrum

FOUND = "Found"
NOT_FOUND = "NotFound"
FOUND_THRESHOLD = 1e-7
MAX_SWEEP_N = 12


@dataclass
class MembershipVerdict:
    verdict: str
    best_residual: float
    witness: Optional[CompressionCode] = None
    restarts_used: int = 0

    @property
    def found(self):
        return self.verdict == FOUND


def _unpack(x, n, k):
    h = n * k
    return (x[:h] + 1j * x[h:]).reshape(n, k)


def _objective(x, d, n, k):
    X = _unpack(x, n, k)
    G = dagger(X) @ (d[:, None] * X)
    H = dagger(X) @ X - np.eye(k)
    f = np.vdot(G, G).real + np.vdot(H, H).real
    # Wirtinger gradients: d/dX of both terms
    grad = 2 * (d[:, None] * X) @ dagger(G) + 2 * (np.conj(d)[:, None] * X) @ G + 4 * X @ H
    return f, np.concatenate([grad.real.ravel(), grad.imag.ravel()])


def _isometry(X):
    """Nearest matrix with orthonormal columns (polar factor)."""
    W, _, Vh = np.linalg.svd(X, full_matrices=False)
    return W @ Vh


def compression_defect(d, V):
    """``||V^dagger diag(d) V||_F`` for orthonormal ``V``."""
    return float(np.linalg.norm(dagger(V) @ (d[:, None] * V)))


def lambda_k_search(spec, k, lam, restarts=64, seed=0, max_iter=2000, threshold=FOUND_THRESHOLD):
    """Search for a rank-k projection ``P`` with ``P U P = lam P``.

    Points farther than 1e-9 outside ``Omega_k`` are rejected without search
    because ``Lambda_k`` lies inside ``Omega_k``; the reported residual is then
    the distance to the polygon.
    """
    n = spec.N
    if k > n:
        return MembershipVerdict(NOT_FOUND, np.inf)
    lam = complex(lam)
    poly = omega_k(spec, k).polygon
    if not geo.contains(poly, lam, geo.EPS_GEOM):
        dist = np.inf if poly.is_empty else geo.distance_to_boundary(poly, lam)
        return MembershipVerdict(NOT_FOUND, dist)

    d = spec.eigenvalues - lam
    rng = np.random.default_rng(seed)
    best_res, best_V = np.inf, None
    used = 0
    for r in range(restarts):
        used = r + 1
        X0 = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / np.sqrt(2 * n)
        X0 = _isometry(X0)
        x0 = np.concatenate([X0.real.ravel(), X0.imag.ravel()])
        sol = scipy.optimize.minimize(
            _objective, x0, args=(d, n, k), jac=True, method="L-BFGS-B",
            options={"maxiter": max_iter, "ftol": 1e-30, "gtol": 1e-16},
        )
        V = _isometry(_unpack(sol.x, n, k))
        res = compression_defect(d, V)
        if res < best_res:
            best_res, best_V = res, V
        if best_res <= threshold:
            break
    if best_res <= threshold:
        code = make_code(spec, best_V, lam, "search")
        code.residual = verify_compression(spec.matrix(), code) if spec.dim == n else code.residual
        if code.residual <= threshold:
            return MembershipVerdict(FOUND, code.residual, code, used)
    return MembershipVerdict(NOT_FOUND, float(best_res), None, used)


def sample_polygon(poly, count, rng, shrink=0.9):
    """Random points of ``poly`` pulled toward its centroid by ``shrink``."""
    if poly.is_empty:
        return []
    c = geo.centroid(poly)
    v = np.array(poly.vertices)
    out = []
    for _ in range(count):
        w = rng.dirichlet(np.ones(len(v)))
        out.append(complex(c + shrink * (np.dot(w, v) - c)))
    return out


@dataclass
class SweepReport:
    N: int
    k: int
    spectra: int
    points: int
    found: int
    worst_residual: float
    empty_spectra: int = 0
    candidates: list = field(default_factory=list)

    @property
    def fraction_found(self):
        return self.found / self.points if self.points else float("nan")

    def as_dict(self):
        return {
            "N": self.N,
            "k": self.k,
            "spectra": self.spectra,
            "points": self.points,
            "found": self.found,
            "fraction_found": self.fraction_found,
            "worst_residual": self.worst_residual,
            "empty_spectra": self.empty_spectra,
            "candidates": self.candidates,
        }


def conjecture_sweep(N, k, num_spectra=20, grid=10, seed=0, restarts=64):
    """Sample random spectra and points of ``Omega_k``; search each point.

    Every point the search fails on is kept in ``candidates``.
    """
    if N > MAX_SWEEP_N:
        raise TooLarge(f"sweeps are limited to N <= {MAX_SWEEP_N}")
    if not 1 <= k <= N:
        raise TooLarge(f"k={k} out of range for N={N}")
    rng = np.random.default_rng(seed)
    report = SweepReport(N, k, num_spectra, 0, 0, 0.0)
    for s in range(num_spectra):
        spec = random_spectrum(N, rng)
        poly = omega_k(spec, k).polygon
        if poly.is_empty:
            report.empty_spectra += 1
            continue
        for i, lam in enumerate(sample_polygon(poly, grid, rng)):
            v = lambda_k_search(spec, k, lam, restarts=restarts, seed=seed + 1000 * s + i)
            report.points += 1
            report.worst_residual = max(report.worst_residual, v.best_residual)
            if v.found:
                report.found += 1
            else:
                report.candidates.append({
                    "spectrum": [float(t) for t in spec.thetas],
                    "lambda": [lam.real, lam.imag],
                    "best_residual": v.best_residual,
                })
    return report
