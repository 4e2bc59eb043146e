"""Spectral data of unitaries and the reduction of normal matrices to unitaries."""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .errors import NotNormal, NotUnitary
from .numerics import as_matrix, dagger, normal_eigensystem

TWO_PI = 2 * np.pi
DEGENERACY_GAP = 1e-9


def _normalize_angles(thetas):
    t = np.mod(np.asarray(thetas, dtype=float), TWO_PI)
    t[t >= TWO_PI] = 0.0
    return t


def _degenerate(thetas, gap=DEGENERACY_GAP):
    n = len(thetas)
    if n < 2:
        return False
    gaps = np.diff(np.append(thetas, thetas[0] + TWO_PI))
    return bool(np.any(gaps <= gap))


@dataclass(frozen=True)
class UnitarySpectrum:
    """Eigenphases (ascending in ``[0, 2pi)``) and matching eigenvector columns.

    ``eigenvectors`` has shape ``(dim, N)``. For a spectrum built from a full
    unitary ``dim == N``; :meth:`subset` produces spectra of the restriction to
    an invariant subspace, whose eigenvectors still live in the ambient space.
    ``order[j]`` is the input position of sorted eigenvalue ``j``.
    """

    thetas: np.ndarray
    eigenvectors: np.ndarray
    source: str = "FromAngles"
    degenerate: bool = False
    order: tuple = field(default=())

    @property
    def N(self):
        return len(self.thetas)

    @property
    def dim(self):
        return self.eigenvectors.shape[0]

    @property
    def eigenvalues(self):
        return np.exp(1j * self.thetas)

    @property
    def points(self):
        return [complex(z) for z in self.eigenvalues]

    def index(self, i):
        return i % self.N

    def lam(self, i):
        return complex(np.exp(1j * self.thetas[i % self.N]))

    def matrix(self):
        """``V diag(exp(i theta)) V^dagger``; a unitary when ``dim == N``."""
        V = self.eigenvectors
        return (V * self.eigenvalues) @ dagger(V)

    def subset(self, indices):
        """Spectrum of the restriction to ``span{psi_j : j in indices}``."""
        idx = sorted(int(i) % self.N for i in indices)
        if len(set(idx)) != len(idx):
            raise ValueError("subset indices must be distinct")
        th = self.thetas[idx]
        return UnitarySpectrum(
            thetas=th,
            eigenvectors=self.eigenvectors[:, idx],
            source=self.source,
            degenerate=_degenerate(th),
            order=tuple(idx),
        )

    def degrees(self):
        return np.degrees(self.thetas)


def from_angles(angles, unit="radians"):
    """Diagonal unitary with the given eigenphases.

    Angles are reduced to ``[0, 2pi)`` and sorted (stable, so ties keep their
    input order). Gaps of at most 1e-9 rad set the ``degenerate`` flag.
    """
    a = np.asarray(angles, dtype=float).ravel()
    if a.size < 1:
        raise ValueError("need at least one angle")
    if unit in ("degrees", "deg"):
        a = np.radians(a)
    elif unit not in ("radians", "rad"):
        raise ValueError(f"unknown angle unit {unit!r}")
    t = _normalize_angles(a)
    order = np.argsort(t, kind="stable")
    t = t[order]
    n = t.size
    V = np.eye(n, dtype=complex)
    return UnitarySpectrum(t, V, "FromAngles", _degenerate(t), tuple(int(i) for i in order))


def from_eigen(values, vectors, source="FromMatrix"):
    """Spectrum from unit-modulus eigenvalues and their eigenvector columns."""
    values = np.asarray(values, dtype=complex)
    t = _normalize_angles(np.angle(values))
    order = np.argsort(t, kind="stable")
    t = t[order]
    V = np.asarray(vectors, dtype=complex)[:, order]
    return UnitarySpectrum(t, V, source, _degenerate(t), tuple(int(i) for i in order))


def equally_spaced(n, offset=0.0):
    """Spectrum of the ``n``-th roots of unity rotated by ``offset`` radians."""
    return from_angles(offset + TWO_PI * np.arange(n) / n)


def random_spectrum(n, rng, min_gap=1e-3):
    """Uniform random eigenphases, resampled until all gaps exceed ``min_gap``."""
    while True:
        t = np.sort(rng.uniform(0, TWO_PI, n))
        gaps = np.diff(np.append(t, t[0] + TWO_PI))
        if n < 2 or gaps.min() > min_gap:
            return from_angles(t)


def from_matrix(M, tol=1e-10):
    """Spectrum of a unitary matrix; eigenvector columns follow the sorted phases."""
    M = as_matrix(M, square=True)
    n = M.shape[0]
    if np.linalg.norm(dagger(M) @ M - np.eye(n)) > tol * max(1.0, np.sqrt(n)):
        raise NotUnitary("matrix is not unitary within tolerance")
    dec = normal_eigensystem(M, tol=max(tol, 1e-10))
    return from_eigen(dec.eigenvalues, dec.eigenvectors)


@dataclass(frozen=True)
class NormalReduction:
    """Result of removing the kernel of ``T - shift I`` and normalizing the rest.

    When ``trivial`` is set the kernel has dimension ``m >= k`` and
    ``kernel_basis`` spans a rank-k subspace compressing ``T`` to ``shift``.
    """

    U: Optional[UnitarySpectrum]
    m: int
    k: int
    k_effective: int
    trivial: bool
    kernel_basis: np.ndarray
    shift: complex = 0j


def reduce_normal(T, k, shift=0j, tol=1e-9):
    """Split ``T - shift I = T1 (+) 0_m`` and return the unitary polar factor of ``T1``.

    The unitary has eigenvalues ``lambda_j / |lambda_j|`` over the nonzero
    eigenvalues, with the corresponding eigenvectors of ``T``.
    """
    T = as_matrix(T, square=True)
    if k < 1:
        raise ValueError("k must be positive")
    n = T.shape[0]
    A = T - shift * np.eye(n)
    try:
        dec = normal_eigensystem(A, tol=max(tol, 1e-10))
    except NotNormal:
        raise
    lam = dec.eigenvalues
    scale = max(1.0, float(np.linalg.norm(A)))
    zero = np.abs(lam) <= tol * scale
    m = int(zero.sum())
    kernel = dec.eigenvectors[:, zero]
    if m >= k:
        return NormalReduction(None, m, k, 0, True, kernel, complex(shift))
    nz = ~zero
    U = from_eigen(lam[nz] / np.abs(lam[nz]), dec.eigenvectors[:, nz])
    return NormalReduction(U, m, k, k - m, False, kernel, complex(shift))


class Membership(str, Enum):
    IN_RANGE = "InRange"
    NOT_IN_RANGE = "NotInRange"
    UNDECIDED = "Undecided"


def construction_covers(N, k, degenerate=False):
    """Whether an implemented construction realizes every point of ``Omega_k``.

    ``k = 1`` and ``k | N`` work for any spectrum; ``N >= 3k`` follows the
    triangle recursion; ``N = 3k - 1`` and ``(5m, 2m)`` need distinct phases.
    """
    if k == 1 or N % k == 0 or N >= 3 * k:
        return True
    if degenerate:
        return False
    return N == 3 * k - 1 or (N % 5 == 0 and 2 * (N // 5) == k)


def normal_membership(T, k, lam, tol=1e-9):
    """Decide ``lam in Lambda_k(T)`` for normal ``T`` via the unitary reduction.

    ``NotInRange`` is always sound. ``InRange`` is returned only when ``0`` lies
    in ``Omega_{k_eff}`` and the reduced ``(N, k_eff)`` pair is covered by a
    construction; otherwise the answer is ``Undecided``.
    """
    from .geometry import contains
    from .omega import omega_k

    red = reduce_normal(T, k, shift=lam, tol=tol)
    if red.trivial:
        return Membership.IN_RANGE
    U = red.U
    if red.k_effective > U.N:
        return Membership.NOT_IN_RANGE
    res = omega_k(U, red.k_effective)
    if not contains(res.polygon, 0j, tol):
        return Membership.NOT_IN_RANGE
    if construction_covers(U.N, red.k_effective, U.degenerate):
        return Membership.IN_RANGE
    return Membership.UNDECIDED
