import numpy as np
import pytest

from hrnr import geometry as geo
from hrnr.codes import (
    DisjointConvexData,
    SigmaVector,
    boundary_code_7_3,
    code_3k_minus_1,
    code_5m_2m,
    code_k_divides_N,
    construct_code,
    disjoint_triangle_cover,
    fourier_sigma_k,
    projection_defects,
    projection_from_disjoint,
    sigma2_solve,
    sigma_null_space,
    verify_compression,
)
from hrnr.errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    EmptyOmega,
    InconsistentLambda,
    NotInOmega,
    NotOnBoundary,
    Unsupported,
)
from hrnr.numerics import dagger, haar_unitary
from hrnr.omega import omega_k
from hrnr.oracle import sample_polygon
from hrnr.spectrum import equally_spaced, from_angles, from_eigen, random_spectrum

STAR_SEVEN = [5, 50, 100, 170, 215, 260, 320]


def assert_good(spec, code, k, tol=1e-9):
    idem, herm, tr = projection_defects(code.projection, k)
    assert max(idem, herm, tr) <= tol
    assert verify_compression(spec.matrix(), code) <= tol


def test_disjoint_data_validation():
    with pytest.raises(ValueError):
        DisjointConvexData(((0, 1), (1, 2)), ((0.5, 0.5), (0.5, 0.5)))
    with pytest.raises(ValueError):
        DisjointConvexData(((0, 1),), ((0.7, 0.7),))


def test_projection_from_disjoint_square():
    # both diagonals of the square pass through 0
    spec = equally_spaced(4)
    data = DisjointConvexData(((0, 2), (1, 3)), ((0.5, 0.5), (0.5, 0.5)))
    code = projection_from_disjoint(spec, data)
    assert abs(code.lam) < 1e-15
    assert_good(spec, code, 2)


def test_fourier_sigma_k_moduli():
    spec = equally_spaced(4)
    data = DisjointConvexData(((0, 2), (1, 3)), ((0.5, 0.5), (0.5, 0.5)))
    code = fourier_sigma_k(spec, data)
    assert_good(spec, code, 2)
    assert np.allclose(np.abs(code.basis), 0.5)


def test_inconsistent_lambda():
    spec = equally_spaced(4)
    data = DisjointConvexData(((0,), (1,)), ((1.0,), (1.0,)))
    with pytest.raises(InconsistentLambda):
        projection_from_disjoint(spec, data)


def test_triangle_cover_is_disjoint(rng):
    for _ in range(20):
        spec = random_spectrum(10, rng)
        poly = omega_k(spec, 3).polygon
        for lam in sample_polygon(poly, 3, rng):
            data = disjoint_triangle_cover(spec, 3, lam)
            flat = [i for s in data.subsets for i in s]
            assert len(flat) == len(set(flat))
            for v in data.values(spec):
                assert abs(v - lam) < 1e-9


def test_k_divides_N():
    spec = from_angles([0, 40, 95, 130, 180, 200, 225, 270, 320], "degrees")
    poly = omega_k(spec, 3).polygon
    code = code_k_divides_N(spec, 3, geo.centroid(poly))
    assert_good(spec, code, 3)


def test_sigma_null_space_orthogonality(rng):
    spec = random_spectrum(5, rng)
    B = sigma_null_space(spec.eigenvalues)
    assert B.shape == (5, 2)
    for col in B.T:
        sums = SigmaVector(col).orthogonality_sums(spec.eigenvalues)
        assert max(abs(s) for s in sums) < 1e-12


def test_sigma2_roots_of_unity_equal_moduli():
    spec = equally_spaced(5)
    sv, code = sigma2_solve(spec, 0)
    w = np.abs(sv.p)
    assert np.ptp(w / w.max()) < 1e-8
    assert_good(spec, code, 2, 1e-8)


def test_sigma2_random(rng):
    for _ in range(5):
        spec = random_spectrum(5, rng, min_gap=0.05)
        poly = omega_k(spec, 2).polygon
        for lam in sample_polygon(poly, 4, rng):
            sv, code = sigma2_solve(spec, lam)
            assert abs(sv.value(spec.eigenvalues) - lam) < 1e-8
            assert_good(spec, code, 2, 1e-8)


def test_sigma2_boundary_vertex(rng):
    spec = random_spectrum(5, rng, min_gap=0.05)
    poly = omega_k(spec, 2).polygon
    lam = poly.vertices[0]
    _, code = sigma2_solve(spec, lam)
    assert code.details["schedule"] == "boundary"
    assert_good(spec, code, 2, 1e-8)


def test_sigma2_rejects_outside():
    with pytest.raises(NotInOmega):
        sigma2_solve(equally_spaced(5), 0.9)


def test_5m_2m_and_3k_minus_1(rng):
    for N, k, build in ((10, 4, lambda s, l: code_5m_2m(s, l)), (8, 3, lambda s, l: code_3k_minus_1(s, 3, l))):
        for _ in range(3):
            spec = random_spectrum(N, rng, min_gap=0.02)
            poly = omega_k(spec, k).polygon
            if poly.is_empty:
                continue
            code = build(spec, geo.centroid(poly))
            assert code.k == k
            assert_good(spec, code, k, 1e-8)


def test_boundary_7_3():
    spec = from_angles(STAR_SEVEN, "degrees")
    poly = omega_k(spec, 3).polygon
    a, b = poly.vertices[0], poly.vertices[1]
    code = boundary_code_7_3(spec, 0.5 * (a + b))
    assert_good(spec, code, 3, 1e-8)
    with pytest.raises(NotOnBoundary):
        boundary_code_7_3(spec, geo.centroid(poly))


def test_construct_code_dispatch(rng):
    cases = {(9, 3): "disjoint_triangles", (8, 4): "k_divides_N", (5, 2): "sigma2",
             (11, 4): "3k_minus_1", (10, 4): "5m_2m"}
    for (N, k), strategy in cases.items():
        spec = random_spectrum(N, rng, min_gap=0.02)
        try:
            code = construct_code(spec, k)
        except EmptyOmega:
            continue
        if strategy != "k_divides_N":
            assert code.strategy == strategy
        assert_good(spec, code, k, 1e-8)


def test_construct_code_errors():
    with pytest.raises(EmptyOmega):
        construct_code(equally_spaced(5), 3)
    with pytest.raises(NotInOmega):
        construct_code(equally_spaced(6), 2, 0.9)
    with pytest.raises(Unsupported):
        spec = from_angles(STAR_SEVEN, "degrees")
        construct_code(spec, 3)
    with pytest.raises(DegenerateSpectrum):
        construct_code(from_angles([0, 0, 90, 180, 270, 45, 135]), 2)


def test_code_for_nondiagonal_unitary(rng):
    Q = haar_unitary(6, rng)
    phases = np.sort(rng.uniform(0, 2 * np.pi, 6))
    U = Q @ np.diag(np.exp(1j * phases)) @ dagger(Q)
    spec = from_eigen(np.exp(1j * phases), Q)
    code = construct_code(spec, 2)
    assert verify_compression(U, code) < 1e-9


def test_verify_dimension_mismatch():
    code = construct_code(equally_spaced(6), 2)
    with pytest.raises(DimensionMismatch):
        verify_compression(np.eye(4), code)



@pytest.mark.parametrize("k, size", [(3, 4), (4, 3)])
def test_twelve_points_at_zero_uses_residue_classes(k, size):
    spec = equally_spaced(12)
    code = code_k_divides_N(spec, k, 0)
    subsets = code.details["subsets"]
    assert sorted(len(s) for s in subsets) == [size] * k
    assert sorted(i for s in subsets for i in s) == list(range(12))
    assert_good(spec, code, k)


def hexagon_data():
    return DisjointConvexData(((0, 2, 4), (1, 3, 5)), ((1 / 3,) * 3, (1 / 3,) * 3))


def test_projection_from_disjoint_examples():
    spec = equally_spaced(6)
    code = projection_from_disjoint(spec, hexagon_data())
    assert abs(code.lam) < 1e-15 and code.residual <= 1e-12
    assert np.allclose(np.abs(code.basis[[0, 2, 4], 0]), 1 / np.sqrt(3))
    pair = from_angles([0, np.pi])
    code = projection_from_disjoint(pair, DisjointConvexData(((0, 1),), ((0.5, 0.5),)))
    assert abs(code.lam) < 1e-15
    assert np.allclose(code.basis[:, 0], [1 / np.sqrt(2)] * 2)


def test_projection_from_random_disjoint_data(rng):
    spec = random_spectrum(9, rng)
    lam = geo.centroid(omega_k(spec, 3).polygon)
    code = projection_from_disjoint(spec, disjoint_triangle_cover(spec, 3, lam))
    assert code.residual <= 1e-10
    assert np.linalg.norm(dagger(code.basis) @ code.basis - np.eye(3)) <= 1e-10


def test_fourier_matches_disjoint_projection(rng):
    spec = equally_spaced(6)
    a = projection_from_disjoint(spec, hexagon_data())
    b = fourier_sigma_k(spec, hexagon_data())
    assert np.linalg.norm(a.projection - b.projection) <= 1e-10
    single = DisjointConvexData(((0, 3),), ((0.5, 0.5),))
    assert np.allclose(fourier_sigma_k(spec, single).basis, projection_from_disjoint(spec, single).basis)
    spec9 = random_spectrum(9, rng)
    data = disjoint_triangle_cover(spec9, 3, geo.centroid(omega_k(spec9, 3).polygon))
    code = fourier_sigma_k(spec9, data)
    S = data.coefficient_matrix(9)
    row = np.abs(S).sum(axis=0) / np.sqrt(3)
    assert np.allclose(np.abs(code.basis), np.repeat(row[:, None], 3, axis=1))
    assert np.linalg.norm(code.projection - projection_from_disjoint(spec9, data).projection) <= 1e-9


@pytest.mark.parametrize("n, k", [(6, 2), (9, 3)])
def test_symmetric_triangle_covers(n, k):
    spec = equally_spaced(n)
    data = disjoint_triangle_cover(spec, k, 0)
    assert all(len(s) == 3 for s in data.subsets)
    for s in data.subsets:
        assert geo.contains(geo.convex_hull([spec.points[i] for i in s]), 0)


def test_square_diagonals():
    code = code_k_divides_N(equally_spaced(4), 2, 0)
    assert code.residual <= 1e-12
    for s in code.details["subsets"]:
        assert len(s) == 2


def test_pentagon_closed_form_witness():
    # p_j = w^(2j) is orthogonal to 1, sigma and conj(sigma) for fifth roots w
    w = np.exp(2j * np.pi / 5)
    sv = SigmaVector(w ** (2 * np.arange(5)))
    pts = equally_spaced(5).eigenvalues
    assert max(abs(x) for x in sv.orthogonality_sums(pts)) < 1e-12
    assert abs(sv.value(pts)) < 1e-12


def test_sigma2_witness_property(rng):
    spec = random_spectrum(5, rng, min_gap=0.05)
    lam = geo.centroid(omega_k(spec, 2).polygon)
    sv, code = sigma2_solve(spec, lam)
    assert max(abs(x) for x in sv.orthogonality_sums(spec.eigenvalues)) <= 1e-8
    assert abs(sv.value(spec.eigenvalues) - lam) <= 1e-8
    assert code.residual <= 1e-8


def test_composition_examples(rng):
    code = code_5m_2m(equally_spaced(10), 0)
    assert code.k == 4 and code.residual <= 1e-8
    spec5 = random_spectrum(5, rng, min_gap=0.05)
    lam = geo.centroid(omega_k(spec5, 2).polygon)
    a = code_5m_2m(spec5, lam)
    _, b = sigma2_solve(spec5, lam)
    assert np.linalg.norm(a.projection - b.projection) < 1e-12
    a = code_3k_minus_1(spec5, 2, lam)
    assert a.strategy == "3k_minus_1" and a.residual <= 1e-8
    code = code_3k_minus_1(equally_spaced(8), 3, 0)
    assert code.k == 3 and code.details["blocks"][0] == "triangle"
    for _ in range(5):
        spec15 = random_spectrum(15, rng)
        poly = omega_k(spec15, 6).polygon
        if poly.is_empty:
            continue
        code = code_5m_2m(spec15, geo.centroid(poly))
        assert code.k == 6 and verify_compression(spec15.matrix(), code) <= 1e-8


def test_3k_minus_1_eleven(rng):
    spec = random_spectrum(11, rng)
    code = code_3k_minus_1(spec, 4, geo.centroid(omega_k(spec, 4).polygon))
    assert code.k == 4 and verify_compression(spec.matrix(), code) <= 1e-8


def test_boundary_7_3_equally_spaced_and_vertex():
    spec = equally_spaced(7)
    poly = omega_k(spec, 3).polygon
    a, b = poly.vertices[:2]
    assert boundary_code_7_3(spec, 0.5 * (a + b)).residual <= 1e-8
    code = boundary_code_7_3(spec, a)
    assert verify_compression(spec.matrix(), code) <= 1e-8


def test_eight_point_register():
    spec = random_spectrum(8, np.random.default_rng(11))
    code = construct_code(spec, 2)
    assert code.strategy == "disjoint_triangles"


def test_codes_lambda_lies_in_omega(rng):
    for _ in range(20):
        n = int(rng.integers(5, 12))
        k = int(rng.integers(1, n // 3 + 1))
        spec = random_spectrum(n, rng)
        poly = omega_k(spec, k).polygon
        code = construct_code(spec, k)
        assert geo.contains(poly, code.lam, 1e-9)


def test_verify_examples(rng):
    U = np.exp(0.7j) * np.eye(5)
    B = np.linalg.qr(rng.standard_normal((5, 2)) + 0j)[0]
    from hrnr.codes import CompressionCode
    scalar = CompressionCode(np.exp(0.7j), B, B @ dagger(B), np.nan, "manual")
    assert verify_compression(U, scalar) < 1e-14
    spec = random_spectrum(9, rng)
    code = construct_code(spec, 3)
    bad_basis = code.basis.copy()
    v = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    bad_basis[:, 0] = v / np.linalg.norm(v)
    bad = CompressionCode(code.lam, bad_basis, bad_basis @ dagger(bad_basis), np.nan, "corrupted")
    assert verify_compression(spec.matrix(), bad) > 1e-3
