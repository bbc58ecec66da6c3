import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from sepcone.lorentz import InvalidDimension, Membership, lorentz_membership
from sepcone.qubit import (PAULI, Hermitian2, MultiQubitState, decompose_multiqubit,
                           from_coefficients, herm2_to_lorentz, inner_ball_cone, inner_radius,
                           lorentz_to_herm2, random_hermitian_direction, to_coefficients,
                           verify_multiqubit_ball)
from sepcone.radii import matrix_ball_radius, multiqubit_bound

coeffs = arrays(float, 4, elements=st.floats(-5, 5, allow_nan=False))


def test_identity_and_projector():
    x = herm2_to_lorentz(Hermitian2(1, 0, 0, 0))
    assert np.allclose(x, [np.sqrt(2), 0, 0, 0])
    assert np.linalg.norm(x) == pytest.approx(np.sqrt(2))
    H = Hermitian2.from_matrix(np.eye(2) + PAULI[3])
    y = herm2_to_lorentz(H)
    assert np.allclose(y, [np.sqrt(2), 0, 0, np.sqrt(2)])
    assert lorentz_membership(y, 1e-12) is Membership.BOUNDARY
    assert H.eigenvalues() == pytest.approx((0.0, 2.0))


@given(coeffs)
def test_round_trip(a):
    H = Hermitian2(*a)
    back = lorentz_to_herm2(herm2_to_lorentz(H))
    assert np.allclose(back.coefficients, a, rtol=0, atol=1e-15 * max(1.0, np.max(np.abs(a))))
    assert np.allclose(Hermitian2.from_matrix(H.matrix()).coefficients, a, atol=1e-14)


def test_inverse_rejects_wrong_length():
    with pytest.raises(InvalidDimension):
        lorentz_to_herm2(np.ones(3))


def test_isometry_and_cone_correspondence():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        H = Hermitian2(*rng.standard_normal(4))
        x = herm2_to_lorentz(H)
        fro = np.linalg.norm(H.matrix())
        assert abs(np.linalg.norm(x) - fro) <= 1e-14 * max(1.0, fro)
        assert H.frobenius_norm() == pytest.approx(fro)
        psd = np.linalg.eigvalsh(H.matrix())[0] >= -1e-12
        assert psd == (lorentz_membership(x, 1e-12) is not Membership.OUTSIDE)


def test_coefficients_are_orthonormal_and_multiplicative():
    rng = np.random.default_rng(1)
    X = random_hermitian_direction(rng, 8)
    c = to_coefficients(X)
    assert np.linalg.norm(c) == pytest.approx(1.0)
    assert np.allclose(from_coefficients(c), X)
    A = random_hermitian_direction(rng, 2)
    B = random_hermitian_direction(rng, 4)
    assert np.allclose(to_coefficients(np.kron(A, B)), np.kron(to_coefficients(A), to_coefficients(B)))
    assert np.allclose(to_coefficients(A), herm2_to_lorentz(Hermitian2.from_matrix(A)))


def test_state_validation():
    assert MultiQubitState.identity(3).distance_to_identity() == 0.0
    with pytest.raises(InvalidDimension):
        MultiQubitState(2, np.eye(3))
    with pytest.raises(ValueError):
        MultiQubitState(1, np.array([[1, 1], [0, 1]]))


def test_inner_ball_cone_matches_psd_cone_for_one_qubit():
    K = inner_ball_cone(1, inner_radius(2, 0.05))
    assert np.allclose(K.P, np.eye(3))


def test_slack_split_covers_target():
    for eps in (0.01, 0.05, 0.2):
        reach = matrix_ball_radius(2, 4, 1.0, inner_radius(3, eps))
        assert reach >= (1 - eps) * multiqubit_bound(3)


def test_product_state_gives_single_atom():
    rng = np.random.default_rng(2)
    H = np.eye(2) + 0.5 * random_hermitian_direction(rng, 2)
    G = np.eye(2) + 0.7 * random_hermitian_direction(rng, 2)
    c = to_coefficients(np.kron(H, G))
    dec = decompose_multiqubit(c, 2, 0.05)
    assert len(dec.weights) == 1
    assert np.linalg.norm(dec.reconstruct() - c) <= 1e-9


def test_harness_small_run():
    rep = verify_multiqubit_ball(2, 0.05, 4, seed=3)
    assert rep.successes == 4
    assert rep.samples[0].distance == 0.0 and rep.samples[0].atoms == 1
    assert all(s.distance == pytest.approx(0.95) for s in rep.samples[1:])


def test_harness_is_deterministic_across_threads():
    a = verify_multiqubit_ball(2, 0.1, 4, seed=5, threads=1)
    b = verify_multiqubit_ball(2, 0.1, 4, seed=5, threads=3)
    assert [(s.residual, s.atoms) for s in a.samples] == [(s.residual, s.atoms) for s in b.samples]


def test_harness_atoms_are_psd_products():
    rng = np.random.default_rng(4)
    X = np.eye(8) + 0.9 * multiqubit_bound(3) * random_hermitian_direction(rng, 8)
    c = to_coefficients(X)
    dec = decompose_multiqubit(c, 3, 0.1, seed=4)
    assert np.linalg.norm(dec.reconstruct() - c) <= 1e-6 * np.linalg.norm(c)
    assert np.all(dec.weights >= 0)
    for factors in dec.factors:
        for f in factors:
            assert lorentz_to_herm2(f).is_psd(1e-10)


@pytest.mark.parametrize("k, eps", [(1, 0.05), (4, 0.05), (2, 0.0), (2, 1.0)])
def test_harness_rejects_bad_arguments(k, eps):
    with pytest.raises(ValueError):
        verify_multiqubit_ball(k, eps, 1)
