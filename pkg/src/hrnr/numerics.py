"""Dense complex linear algebra used by the rest of the package.

Matrices are plain complex ``numpy`` arrays. The eigensolvers wrap LAPACK
through :mod:`numpy.linalg` and add the input checks and the two-stage
simultaneous diagonalization needed for normal matrices.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import NoConvergence, NotHermitian, NotNormal


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues with an orthonormal matrix of eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def residual(self, A):
        """Return ``||A V - V diag(w)||_F``."""
        V = self.eigenvectors
        return float(np.linalg.norm(A @ V - V * self.eigenvalues))

    def orthonormality_defect(self):
        V = self.eigenvectors
        return float(np.linalg.norm(V.conj().T @ V - np.eye(V.shape[1])))


def as_matrix(A, square=False):
    """Coerce ``A`` to a finite 2-D complex array."""
    M = np.asarray(A, dtype=complex)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def dagger(A):
    return np.conj(A).T


def hermitian_eigensystem(H, tol=1e-12):
    """Diagonalize a Hermitian matrix.

    Parameters
    ----------
    H : array_like
        Square complex matrix with ``||H - H^dagger||_F <= tol * ||H||_F``.
    tol : float
        Relative symmetry tolerance.

    Returns
    -------
    SpectralDecomposition
        Real eigenvalues in ascending order.
    """
    H = as_matrix(H, square=True)
    scale = np.linalg.norm(H)
    if np.linalg.norm(H - dagger(H)) > tol * max(scale, 1.0):
        raise NotHermitian("matrix is not Hermitian within tolerance")
    Hs = 0.5 * (H + dagger(H))
    try:
        w, V = np.linalg.eigh(Hs)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return SpectralDecomposition(w.astype(float), V)


def _phase(z):
    return np.mod(np.angle(z), 2 * np.pi)


def normal_eigensystem(A, tol=1e-10, group_tol=None):
    """Diagonalize a normal matrix by simultaneous diagonalization.

    The Hermitian part ``(A + A^dagger)/2`` is diagonalized first. Within each
    cluster of its eigenvalues (gap at most ``group_tol``) the skew part
    ``(A - A^dagger)/2i`` is diagonalized. Eigenvalues are returned sorted by
    phase in ``[0, 2pi)`` and then by modulus.

    If the two-stage result misses the residual bound (tightly clustered but
    unmerged Hermitian eigenvalues), the complex Schur form is used instead;
    for a normal matrix it is diagonal.
    """
    A = as_matrix(A, square=True)
    n = A.shape[0]
    scale = np.linalg.norm(A)
    if np.linalg.norm(A @ dagger(A) - dagger(A) @ A) > tol * max(scale, 1.0) ** 2:
        raise NotNormal("matrix is not normal within tolerance")
    if n == 0:
        return SpectralDecomposition(np.zeros(0, complex), np.zeros((0, 0), complex))
    if group_tol is None:
        group_tol = 1e-8 * max(scale, 1e-300)

    herm = 0.5 * (A + dagger(A))
    skew = (A - dagger(A)) / 2j
    try:
        w, V = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc

    start = 0
    for stop in range(1, n + 1):
        if stop == n or w[stop] - w[stop - 1] > group_tol:
            if stop - start > 1:
                block = V[:, start:stop]
                small = dagger(block) @ skew @ block
                _, W = np.linalg.eigh(0.5 * (small + dagger(small)))
                V[:, start:stop] = block @ W
            start = stop

    lam = np.einsum("ij,ij->j", V.conj(), A @ V)
    if np.linalg.norm(A @ V - V * lam) > max(tol, 1e-12) * max(scale, 1.0):
        T, Z = scipy.linalg.schur(A, output="complex")
        lam, V = np.diag(T).copy(), Z

    order = np.lexsort((np.round(np.abs(lam), 12), np.round(_phase(lam), 12)))
    return SpectralDecomposition(lam[order], V[:, order])


def polar_decompose(A, tol=1e-12):
    """Return ``(U, R)`` with ``A = U R``, ``R = sqrt(A^dagger A)`` and ``U`` unitary.

    On ``ker(R)`` the unitary factor is completed by an arbitrary orthonormal
    completion, which the SVD provides.
    """
    A = as_matrix(A, square=True)
    W, s, Vh = np.linalg.svd(A)
    U = W @ Vh
    R = dagger(Vh) @ (s[:, None] * Vh)
    R = 0.5 * (R + dagger(R))
    return U, R


def sqrtm_psd(H):
    """Square root of a Hermitian PSD matrix, clamping negative rounding to 0."""
    dec = hermitian_eigensystem(H, tol=1e-8)
    w = np.clip(dec.eigenvalues, 0.0, None)
    V = dec.eigenvectors
    return (V * np.sqrt(w)) @ dagger(V)


def orthonormalize(vectors, tol=1e-10):
    """Orthonormalize a list of vectors with modified Gram-Schmidt.

    Two passes are made per vector. Vectors whose remaining norm falls below
    ``tol`` times their original norm are dropped, so the number of returned
    columns is the effective rank.

    Returns
    -------
    numpy.ndarray
        Matrix of shape ``(dim, rank)``.
    """
    vecs = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    if not vecs:
        return np.zeros((0, 0), dtype=complex)
    dim = vecs[0].size
    if any(v.size != dim for v in vecs):
        raise ValueError("vectors must share one dimension")
    basis = []
    for v in vecs:
        norm0 = np.linalg.norm(v)
        if norm0 == 0:
            continue
        w = v.copy()
        for _ in range(2):
            for q in basis:
                w = w - np.vdot(q, w) * q
        nrm = np.linalg.norm(w)
        if nrm <= tol * norm0:
            continue
        basis.append(w / nrm)
    if not basis:
        return np.zeros((dim, 0), dtype=complex)
    return np.column_stack(basis)


def orthonormal_completion(Q, dim=None):
    """Extend the orthonormal columns of ``Q`` to a basis; return the new columns."""
    Q = np.asarray(Q, dtype=complex)
    if dim is None:
        dim = Q.shape[0]
    full = orthonormalize(list(Q.T) + list(np.eye(dim, dtype=complex)))
    return full[:, Q.shape[1]:]


def is_unitary(U, tol=1e-10):
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return np.linalg.norm(dagger(U) @ U - np.eye(U.shape[0])) <= tol


def haar_unitary(n, rng):
    """Haar-distributed unitary from the QR factorization of a Ginibre matrix."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
