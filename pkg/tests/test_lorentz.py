import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from sepcone.lorentz import (EllipsoidSpec, InvalidDimension, Membership, apply_map, boost,
                             ellipsoid_membership, lorentz_gap, lorentz_membership, minkowski,
                             minkowski_quad, random_automorphism, rotation, sample_boundary,
                             sample_interior)
from sepcone.maps import canonical_extreme

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("x, expected", [
    ((1, 0, 0, 0), Membership.INTERIOR),
    ((1, 1, 0), Membership.BOUNDARY),
    ((0.5, 1, 0), Membership.OUTSIDE),
    ((0, 0, 0), Membership.BOUNDARY),
    ((-1, 0), Membership.OUTSIDE),
])
def test_lorentz_membership_examples(x, expected):
    assert lorentz_membership(x, 1e-12) is expected


def test_lorentz_membership_rejects_short_vectors():
    with pytest.raises(InvalidDimension):
        lorentz_membership([1.0])


@pytest.mark.parametrize("P, x, expected", [
    (np.eye(2), (1, 0, 0), Membership.INTERIOR),
    (4 * np.eye(2), (1, 0.5, 0), Membership.BOUNDARY),
    (4 * np.eye(2), (1, 1, 0), Membership.OUTSIDE),
])
def test_ellipsoid_membership_examples(P, x, expected):
    assert ellipsoid_membership(x, EllipsoidSpec(P), 1e-12) is expected


def test_ellipsoid_requires_positive_definite():
    with pytest.raises(ValueError):
        EllipsoidSpec(np.diag([1.0, 0.0]))
    with pytest.raises(ValueError):
        EllipsoidSpec(np.diag([1.0, -2.0]))


def test_ellipsoid_dimension_mismatch():
    with pytest.raises(InvalidDimension):
        ellipsoid_membership((1, 0), EllipsoidSpec(np.eye(2)))


@given(arrays(float, 4, elements=finite))
def test_membership_is_scale_invariant(x):
    for t in (0.5, 3.0):
        assert lorentz_membership(x, 0.0) is lorentz_membership(t * x, 0.0) or abs(lorentz_gap(x)) < 1e-12


def test_ellipsoid_maps_lorentz_onto_itself():
    K = EllipsoidSpec(np.diag([4.0, 0.25, 2.0]))
    rng = np.random.default_rng(1)
    for x in sample_boundary(rng, 4, 50):
        y = K.from_lorentz() @ x
        assert abs(K.gap(y)) < 1e-12


def test_ball_cone_aperture():
    K = EllipsoidSpec.ball(0.6, 3)
    # ball of radius 0.6 around e_0: the point (1, 0.75, 0) has distance sin = 0.6 to the axis after normalizing
    x = np.array([1.0, 0.75, 0.0])
    assert abs(K.gap(x)) < 1e-12
    assert np.isclose(x[1] / np.linalg.norm(x), 0.6)


def test_boost_identity():
    assert np.array_equal(boost(np.zeros(3), 4).matrix, np.eye(4))


def test_boost_top_left_entry_and_form():
    U = boost([1.0, 0.0, 0.0], 4)
    assert np.isclose(U.matrix[0, 0], np.sqrt(2.0))
    J = minkowski(4)
    assert np.max(np.abs(U.matrix.T @ J @ U.matrix - J)) <= 1e-12


def test_boost_preserves_form_on_random_draws():
    rng = np.random.default_rng(2)
    J = minkowski(5)
    for _ in range(100):
        U = boost(rng.standard_normal(4) * rng.uniform(0, 5), 5).matrix
        assert np.max(np.abs(U.T @ J @ U - J)) <= 1e-10


def test_boost_derivative_at_zero():
    eps = 1e-7
    b = np.array([0.3, -1.0, 2.0])
    D = (boost(eps * b, 4).matrix - boost(-eps * b, 4).matrix) / (2 * eps)
    expected = np.zeros((4, 4))
    expected[0, 1:] = b
    expected[1:, 0] = b
    assert np.allclose(D, expected, atol=1e-7)


def test_boost_dimension_check():
    with pytest.raises(InvalidDimension):
        boost([1.0, 2.0], 4)


def test_random_automorphism_preserves_boundary():
    U = random_automorphism(0, 4)
    rng = np.random.default_rng(3)
    for x in sample_boundary(rng, 4, 50):
        assert lorentz_membership(U.matrix @ x, 1e-9) is Membership.BOUNDARY
    assert U.form_defect() <= 1e-12


def test_random_automorphism_deterministic():
    assert np.array_equal(random_automorphism(0, 4).matrix, random_automorphism(0, 4).matrix)


def test_random_automorphism_two_dimensional():
    U = random_automorphism(7, 2).matrix
    assert U.shape == (2, 2)
    for x in ([1, 1], [1, -1], [2, 0.5]):
        assert lorentz_membership(U @ np.array(x, float), 1e-12) is not Membership.OUTSIDE
    assert lorentz_membership(U @ np.array([0.5, 1.0]), 1e-12) is Membership.OUTSIDE


def test_automorphism_inverse_and_composition():
    U = random_automorphism(4, 5)
    V = random_automorphism(5, 5)
    assert np.allclose((U @ U.inverse).matrix, np.eye(5), atol=1e-10)
    assert (U @ V).form_defect() < 1e-9


def test_rotation_is_automorphism():
    Q, _ = np.linalg.qr(np.random.default_rng(6).standard_normal((3, 3)))
    assert rotation(Q).form_defect() < 1e-12


def test_apply_map_examples():
    assert np.array_equal(apply_map(np.eye(3), [1, 2, 3]), [1, 2, 3])
    M1 = canonical_extreme("TypeI", 3, 3)
    assert np.array_equal(apply_map(M1, [1, 0, 0]), [1, 1, 0])
    assert np.array_equal(apply_map(np.zeros((3, 4)), [1, 2, 3, 4]), np.zeros(3))


def test_samplers():
    rng = np.random.default_rng(8)
    X = sample_boundary(rng, 5, 20)
    assert np.allclose(X[:, 0], 1.0)
    assert np.allclose(np.linalg.norm(X[:, 1:], axis=1), 1.0)
    Y = sample_interior(rng, 5, 20)
    assert all(lorentz_membership(y) is Membership.INTERIOR for y in Y)


def test_minkowski_quad_vanishes_on_boundary():
    assert minkowski_quad([1, 0.6, 0.8]) == pytest.approx(0.0, abs=1e-15)
    assert minkowski_quad([1, 0, 0]) == 1.0
