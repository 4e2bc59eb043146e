"""Binary unitary channels, Knill-Laflamme checks and recovery construction."""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidState, KLViolated, NotProjection, RankCollapse
from .numerics import as_matrix, dagger, hermitian_eigensystem, polar_decompose


@dataclass(frozen=True)
class KrausChannel:
    """Channel ``rho -> sum_a E_a rho E_a^dagger``."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(E, square=True) for E in self.operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        object.__setattr__(self, "operators", ops)

    @property
    def dim(self):
        return self.operators[0].shape[0]

    def trace_defect(self):
        S = sum(dagger(E) @ E for E in self.operators)
        return float(np.linalg.norm(S - np.eye(self.dim)))

    def __call__(self, rho):
        return sum(E @ rho @ dagger(E) for E in self.operators)

    def compose(self, other):
        """Kraus form of ``self o other`` (``other`` acts first)."""
        return KrausChannel(tuple(A @ B for A in self.operators for B in other.operators))


@dataclass(frozen=True)
class BinaryUnitaryChannel:
    """``rho -> p rho + (1 - p) U rho U^dagger`` with ``0 < p < 1``."""

    p: float
    U: np.ndarray

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        U = as_matrix(self.U, square=True)
        if np.linalg.norm(dagger(U) @ U - np.eye(U.shape[0])) > 1e-10 * max(1.0, np.sqrt(U.shape[0])):
            raise ValueError("U must be unitary")
        object.__setattr__(self, "U", U)

    def kraus(self):
        n = self.U.shape[0]
        return KrausChannel((np.sqrt(self.p) * np.eye(n), np.sqrt(1 - self.p) * self.U))


def _as_kraus(ch):
    return ch.kraus() if isinstance(ch, BinaryUnitaryChannel) else ch


def _check_state(rho, tol=1e-9):
    rho = as_matrix(rho, square=True)
    if np.linalg.norm(rho - dagger(rho)) > tol:
        raise InvalidState("state is not Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise InvalidState("state does not have unit trace")
    if np.linalg.eigvalsh(0.5 * (rho + dagger(rho))).min() < -tol:
        raise InvalidState("state is not positive semidefinite")
    return rho


def apply_channel(ch, rho):
    """Apply a Kraus or binary unitary channel to a density matrix."""
    ch = _as_kraus(ch)
    rho = _check_state(rho)
    if rho.shape[0] != ch.dim:
        raise InvalidState("state and channel dimensions differ")
    return ch(rho)


@dataclass(frozen=True)
class KLWitness:
    lambda_matrix: np.ndarray
    residual: float


def _check_projection(P, tol=1e-9):
    P = as_matrix(P, square=True)
    if np.linalg.norm(P @ P - P) > tol or np.linalg.norm(P - dagger(P)) > tol:
        raise NotProjection("P is not an orthogonal projection")
    return P


def kl_verify(ch, P, tol=1e-9):
    """Estimate ``lambda_ab = tr(P E_a^dagger E_b P) / tr P`` and the KL residual.

    The residual is ``max_ab ||P E_a^dagger E_b P - lambda_ab P||_F``.
    """
    ch = _as_kraus(ch)
    P = _check_projection(P, tol)
    ops = ch.operators
    n = len(ops)
    trP = np.trace(P).real
    lam = np.zeros((n, n), dtype=complex)
    residual = 0.0
    for a in range(n):
        for b in range(n):
            M = P @ dagger(ops[a]) @ ops[b] @ P
            lam[a, b] = np.trace(M) / trP
            residual = max(residual, float(np.linalg.norm(M - lam[a, b] * P)))
    return KLWitness(lam, residual)


def code_basis(P, tol=1e-6):
    """Orthonormal basis of ``range(P)``."""
    dec = hermitian_eigensystem(_check_projection(P), tol=1e-8)
    return dec.eigenvectors[:, dec.eigenvalues > 0.5]


def build_recovery(ch, P, tol=1e-10, kl_tol=1e-8):
    """Recovery channel ``R`` with ``R(E(rho)) = rho`` for states supported on ``P``.

    The KL matrix is diagonalized as ``W D W^dagger``; the rotated errors
    ``F_a = sum_b W_ba E_b`` satisfy ``P F_a^dagger F_b P = d_a delta_ab P``.
    Polar decomposition of ``F_a P`` gives unitaries ``U_a`` whose images
    ``Q_a = U_a P U_a^dagger`` are mutually orthogonal, and the recovery is
    ``{P U_a^dagger}`` plus the projector onto the complement of ``sum Q_a``.
    """
    ch = _as_kraus(ch)
    P = _check_projection(P)
    wit = kl_verify(ch, P)
    if wit.residual > kl_tol:
        raise KLViolated(f"Knill-Laflamme residual {wit.residual:.3e} exceeds {kl_tol:.1e}")
    dec = hermitian_eigensystem(wit.lambda_matrix, tol=1e-8)
    d, W = dec.eigenvalues, dec.eigenvectors
    n = ch.dim
    ops = ch.operators
    recovery = []
    Q_total = np.zeros((n, n), dtype=complex)
    ranges = []
    for a in range(len(ops)):
        if tol < d[a] < 10 * tol:
            raise RankCollapse(f"eigenvalue d_{a} = {d[a]:.3e} is too close to the threshold")
        if d[a] <= tol:
            continue
        F = sum(W[b, a] * ops[b] for b in range(len(ops)))
        Ua, _ = polar_decompose(F @ P)
        Q = Ua @ P @ dagger(Ua)
        ranges.append(Q)
        Q_total += Q
        recovery.append(P @ dagger(Ua))
    rest = np.eye(n) - Q_total
    rest = 0.5 * (rest + dagger(rest))
    if np.linalg.norm(rest) > 1e-12:
        recovery.append(rest)
    rec = KrausChannel(tuple(recovery))

    # linearity: checking the matrix units of the code space suffices
    B = code_basis(P)
    total = rec.compose(ch)
    for i in range(B.shape[1]):
        for j in range(B.shape[1]):
            unit = np.outer(B[:, i], B[:, j].conj())
            if np.linalg.norm(total(unit) - unit) > kl_tol:
                raise KLViolated("recovery does not invert the channel on the code")
    return rec


def range_overlaps(rec, P):
    """Largest ``||Q_a Q_b||_F`` over distinct ranges ``Q_a = R_a^dagger R_a``."""
    Qs = [dagger(R) @ R for R in rec.operators]
    worst = 0.0
    for a in range(len(Qs)):
        for b in range(a + 1, len(Qs)):
            worst = max(worst, float(np.linalg.norm(Qs[a] @ Qs[b])))
    return worst


@dataclass(frozen=True)
class RoundTripStats:
    trials: int
    min_fidelity: float
    mean_fidelity: float


def simulate_roundtrip(ch, rec, P, trials=100, seed=0):
    """Fidelity of ``R(E(rho))`` with random pure code states ``rho``.

    States are Gaussian vectors in the code subspace drawn from
    ``numpy.random.default_rng(seed)``.
    """
    ch = _as_kraus(ch)
    rec = _as_kraus(rec)
    B = code_basis(P)
    rng = np.random.default_rng(seed)
    fids = []
    for _ in range(trials):
        c = rng.standard_normal(B.shape[1]) + 1j * rng.standard_normal(B.shape[1])
        psi = B @ (c / np.linalg.norm(c))
        rho = np.outer(psi, psi.conj())
        out = rec(ch(rho))
        fids.append(float(np.real(np.vdot(psi, out @ psi))))
    fids = np.array(fids)
    return RoundTripStats(trials, float(fids.min()), float(fids.mean()))


def identity_channel(n):
    return KrausChannel((np.eye(n, dtype=complex),))
