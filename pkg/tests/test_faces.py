import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sepcone.faces import (InvalidGenerator, TypeIFaceSpec, boundary_dimension,
                           face_intersection_witness, pairing, type1_face_element,
                           type1_face_dimension, type1_type2_witness, type2_face_map,
                           type2_generator, type2_membership, z1_embed, z1_point)
from sepcone.lorentz import sample_boundary
from sepcone.maps import ExtremeTag, canonical_extreme, classify_extreme, random_positive_map

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


def test_zero_generators_give_zero():
    spec = TypeIFaceSpec(E1, E2)
    assert np.array_equal(type1_face_element(spec, np.zeros(3), np.zeros(3)), np.zeros((3, 3)))


def test_face_element_pairs_to_zero_with_its_extreme_map():
    spec = TypeIFaceSpec(E1, E2)
    B = type1_face_element(spec, [1, 1, 0], [1, 0, 1])
    assert pairing(B, spec.extreme_map()) == pytest.approx(0.0, abs=1e-15)


def test_standard_face_matches_explicit_generators():
    # h = v = -e_1: generators (1; -e_1) x^T + y (1, -e_1); the defining map is canonical M_1
    spec = TypeIFaceSpec(-E1, -E1)
    assert np.array_equal(spec.extreme_map().matrix, canonical_extreme("TypeI", 3, 3).matrix)
    x = np.array([1.0, 0.0, 1.0])
    B = type1_face_element(spec, x, np.zeros(3))
    assert np.array_equal(B[1], -x)
    assert np.array_equal(B[0], x)


def test_interior_generator_rejected():
    spec = TypeIFaceSpec(E1, E2)
    with pytest.raises(InvalidGenerator):
        type1_face_element(spec, [1, 0.5, 0], [1, 0, 1])


def test_non_unit_spec_rejected():
    with pytest.raises(ValueError):
        TypeIFaceSpec(np.array([0.5, 0.0]), E2)


def test_z1_embed_examples():
    m = n = 3
    B = z1_embed(np.zeros(m + n - 1), m, n)
    assert B[0, 0] == 0 and B[1, 0] == -1 and B[1, 1] == 2
    z = np.array([1.0, 2.0, 0.0, 0.0, 0.0])  # first sphere at its z_1 = 2 pole
    expected = np.outer([1.0, -1.0, 0.0], [1.0, 1.0, 0.0])
    assert np.array_equal(z1_embed(z, m, n), expected)


def test_z1_embed_injective_and_in_face():
    rng = np.random.default_rng(0)
    m, n = 4, 3
    M1 = canonical_extreme("TypeI", m, n)
    pts = [z1_point(rng, m, n, s) for s in (0, 1, 0, 1)]
    mats = [z1_embed(z, m, n) for z in pts]
    for i in range(len(mats)):
        assert pairing(mats[i], M1) == pytest.approx(0.0, abs=1e-14)
        for j in range(i):
            assert not np.allclose(mats[i], mats[j])


def test_z1_embed_dimension_check():
    with pytest.raises(ValueError):
        z1_embed(np.zeros(3), 3, 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(3, 6), st.integers(3, 6))
def test_type1_elements_are_dual_nonnegative(seed, m, n):
    rng = np.random.default_rng(seed)
    spec = TypeIFaceSpec.random(rng, m, n)
    x, y = sample_boundary(rng, m, 1)[0], sample_boundary(rng, n, 1)[0]
    B = type1_face_element(spec, x, y)
    assert abs(pairing(B, spec.extreme_map())) <= 1e-12
    for _ in range(5):
        assert pairing(B, random_positive_map(rng, m, n)) >= -1e-12


def test_type2_membership_examples():
    h = np.array([0.6, 0.8])
    G = type2_generator(h)
    assert type2_membership(G)
    assert not type2_membership(np.eye(3))
    G2 = type2_generator(np.array([0.0, 1.0]))
    assert type2_membership(0.3 * G + 0.7 * G2)


def test_type2_membership_rectangular_and_transposed():
    h = np.array([1.0, 0.0])
    G = type2_generator(h, 5)
    assert G.shape == (5, 3)
    assert type2_membership(G) and type2_membership(G.T)
    G[4, 0] = 1e-3
    assert not type2_membership(G)


def test_type2_face_map_annihilates_generators():
    rng = np.random.default_rng(1)
    m, n = 4, 6
    M = type2_face_map(m, n)
    assert classify_extreme(M).tag is ExtremeTag.TYPE_II
    for _ in range(20):
        h = rng.standard_normal(m - 1)
        G = type2_generator(h / np.linalg.norm(h), n)
        assert pairing(G, M) == pytest.approx(0.0, abs=1e-14)


def test_intersection_of_equal_specs():
    spec = TypeIFaceSpec(E1, E2)
    W = face_intersection_witness(spec, spec)
    assert np.array_equal(W, np.outer([1.0, 0.0, 1.0], [1.0, 1.0, 0.0]))


def test_intersection_of_distinct_specs():
    a, b = TypeIFaceSpec(E1, E2), TypeIFaceSpec(E2, E1)
    W = face_intersection_witness(a, b)
    assert np.array_equal(W, np.outer([1.0, 1.0, 0.0], [1.0, 1.0, 0.0]))
    assert pairing(W, a.extreme_map()) == 0.0
    assert pairing(W, b.extreme_map()) == 0.0


def test_type1_type2_witness():
    rng = np.random.default_rng(2)
    spec = TypeIFaceSpec.random(rng, 3, 5)
    W = type1_type2_witness(spec)
    assert abs(pairing(W, spec.extreme_map())) < 1e-14
    assert type2_membership(W)
    assert abs(pairing(W, type2_face_map(3, 5))) < 1e-14


def test_dimension_counts():
    assert type1_face_dimension(3, 3) == 7
    assert boundary_dimension(3, 3) == 8
    for m in range(3, 8):
        assert type1_face_dimension(m, m) < boundary_dimension(m, m)
