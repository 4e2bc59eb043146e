import numpy as np
import pytest

from hrnr.errors import NotUnitary
from hrnr.numerics import dagger, haar_unitary
from hrnr.spectrum import (
    Membership,
    equally_spaced,
    from_angles,
    from_matrix,
    normal_membership,
    random_spectrum,
    reduce_normal,
)


def test_from_angles_sorts_and_wraps():
    spec = from_angles([350, 10, -20, 720], unit="degrees")
    assert np.allclose(spec.degrees(), [0, 10, 340, 350])
    assert spec.order == (3, 1, 2, 0)
    assert not spec.degenerate


def test_from_angles_flags_repeats():
    assert from_angles([0.1, 0.1, 2.0]).degenerate
    assert from_angles([0.0, 2 * np.pi - 1e-12]).degenerate


def test_from_angles_rejects_bad_unit():
    with pytest.raises(ValueError):
        from_angles([1, 2], unit="turns")


def test_matrix_round_trip(rng):
    spec = random_spectrum(6, rng)
    U = spec.matrix()
    back = from_matrix(U)
    assert np.allclose(back.thetas, spec.thetas)


def test_from_matrix_recovers_eigenvectors(rng):
    Q = haar_unitary(5, rng)
    phases = np.array([0.3, 1.0, 2.5, 4.0, 5.5])
    U = Q @ np.diag(np.exp(1j * phases)) @ dagger(Q)
    spec = from_matrix(U)
    assert np.allclose(spec.thetas, phases)
    V = spec.eigenvectors
    assert np.linalg.norm(U @ V - V * spec.eigenvalues) < 1e-10
    assert np.linalg.norm(spec.matrix() - U) < 1e-10


def test_from_matrix_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        from_matrix(np.diag([1.0, 2.0]))


def test_subset_keeps_ambient_vectors():
    spec = equally_spaced(5)
    sub = spec.subset([0, 2, 4])
    assert sub.N == 3 and sub.dim == 5
    assert np.allclose(sub.eigenvalues, spec.eigenvalues[[0, 2, 4]])


def test_random_spectrum_gap(rng):
    for _ in range(20):
        spec = random_spectrum(10, rng, min_gap=0.05)
        gaps = np.diff(np.append(spec.thetas, spec.thetas[0] + 2 * np.pi))
        assert gaps.min() > 0.05


def test_reduce_normal_trivial_kernel():
    T = np.diag([0, 0, 0, 1, 1j])
    red = reduce_normal(T, 2)
    assert red.trivial and red.m == 3
    B = red.kernel_basis
    P = B[:, :2] @ dagger(B[:, :2])
    assert np.linalg.norm(P @ T @ P) < 1e-12


def test_reduce_normal_nontrivial():
    T = np.diag([0, 2, 2j, -3, -1j * 0.5])
    red = reduce_normal(T, 2)
    assert not red.trivial
    assert red.m == 1 and red.k_effective == 1
    assert np.allclose(np.abs(red.U.eigenvalues), 1)
    assert red.U.N == 4


def test_normal_membership():
    # Lambda_2 of the 4th roots of unity is {0}
    T = np.diag(np.exp(2j * np.pi * np.arange(4) / 4))
    assert normal_membership(T, 2, 0) is Membership.IN_RANGE
    assert normal_membership(T, 2, 0.1) is Membership.NOT_IN_RANGE
    # scaling moduli does not move the phases that decide membership
    T2 = np.diag([2, 1j, -0.5, -3j])
    assert normal_membership(T2, 2, 0) is Membership.IN_RANGE
    assert normal_membership(T2, 1, 5) is Membership.NOT_IN_RANGE


def test_from_angles_examples():
    spec = from_angles([0, 90, 180, 270], "degrees")
    assert np.allclose(spec.thetas, [0, np.pi / 2, np.pi, 3 * np.pi / 2])
    assert np.array_equal(spec.eigenvectors, np.eye(4))
    spec = from_angles([350, 10], "degrees")
    assert np.allclose(spec.degrees(), [10, 350]) and spec.order == (1, 0)
    assert from_angles([0, 1e-12], "degrees").degenerate


def test_from_matrix_examples():
    spec = from_matrix(np.eye(3))
    assert np.allclose(spec.thetas, 0) and spec.degenerate
    spec = from_matrix(np.diag([1, 1j, -1]))
    assert np.allclose(spec.thetas, [0, np.pi / 2, np.pi])


def test_matrix_round_trip_many(rng):
    for _ in range(500):
        n = int(rng.integers(1, 17))
        spec = random_spectrum(n, rng)
        back = from_matrix(spec.matrix())
        assert np.allclose(np.sort(back.thetas), np.sort(spec.thetas), atol=1e-9)


def test_cyclic_index():
    spec = equally_spaced(7)
    for i in range(-7, 14):
        assert spec.index(i + 7) == spec.index(i)


def test_reduce_normal_examples():
    red = reduce_normal(np.diag([0, 0, 2j]), 2)
    assert red.trivial and red.m == 2
    red = reduce_normal(np.diag([1, 2, 3j, -4]), 1)
    assert red.m == 0 and red.k_effective == 1
    assert np.allclose(red.U.thetas, [0, 0, np.pi / 2, np.pi])
    assert red.U.degenerate
    U = np.diag(np.exp(1j * np.array([0.2, 1.5, 3.0])))
    red = reduce_normal(U, 2)
    assert red.m == 0 and red.k_effective == 2
    assert np.allclose(red.U.eigenvalues, np.diag(U))


def test_hermitian_membership():
    assert normal_membership(np.diag(np.arange(1, 8)), 2, 4) is Membership.IN_RANGE
    assert normal_membership(np.diag(np.arange(1, 8)), 2, 6.5) is Membership.NOT_IN_RANGE


def test_shift_matches_translation(rng):
    for _ in range(200):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(1, n // 2 + 2))
        Q = haar_unitary(n, rng)
        d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        T = Q @ np.diag(d) @ dagger(Q)
        lam = complex(rng.standard_normal() * 0.3, rng.standard_normal() * 0.3)
        direct = normal_membership(T - lam * np.eye(n), k, 0)
        shifted = normal_membership(T, k, lam)
        assert direct is shifted
