import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from calgrass.acceptance import _random_rotation
from calgrass.grassmannian import (
    OrientedFrame,
    PlaneSampler,
    SubspaceGrassmannian,
    horizontal_basis,
    orthogonal_complement,
    pluecker,
    pluecker_coordinates,
    pluecker_indices,
    projection_rank,
    random_frames,
    random_plane,
    random_subspace,
    retract,
    tangent_project,
)


@st.composite
def frames_and_rotations(draw):
    n = draw(st.integers(1, 8))
    k = draw(st.integers(1, n))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    return random_frames(n, k, 1, rng)[0], _random_rotation(rng, k)


@settings(max_examples=100)
@given(frames_and_rotations())
def test_pluecker_invariant_under_frame_rotation(case):
    F, R = case
    assert np.abs(pluecker_coordinates(F) - pluecker_coordinates(F @ R)).max() < 1e-9


def test_random_frames_orthonormal_and_seeded():
    A = random_frames(7, 3, 10, seed=5)
    assert A.shape == (10, 7, 3)
    gram = np.einsum("sij,sik->sjk", A, A)
    assert np.abs(gram - np.eye(3)).max() < 1e-12
    assert np.array_equal(A, random_frames(7, 3, 10, seed=5))


def test_haar_second_moment(rng):
    # E[p_I^2] = 1 / C(n, k) by symmetry of the Haar measure
    P = pluecker_coordinates(random_frames(5, 2, 20000, rng))
    assert np.allclose((P**2).mean(axis=0), 1 / math.comb(5, 2), atol=0.01)


def test_pluecker_is_unit_and_satisfies_the_relation(rng):
    for _ in range(20):
        p = pluecker(random_plane(4, 2, rng))
        assert p.norm() == pytest.approx(1.0)
        rel = p[(1, 2)] * p[(3, 4)] - p[(1, 3)] * p[(2, 4)] + p[(1, 4)] * p[(2, 3)]
        assert abs(rel) < 1e-12


def test_pluecker_indices_order():
    assert pluecker_indices(4, 2) == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]


def test_flip_negates_pluecker(rng):
    plane = random_plane(6, 3, rng)
    assert pluecker(plane.flipped()).allclose(-pluecker(plane))


def test_coordinate_frame():
    assert pluecker(OrientedFrame.coordinate(6, (1, 3, 5))).coeffs == {(1, 3, 5): 1.0}


def test_from_matrix_keeps_orientation(rng):
    A = rng.normal(size=(5, 2))
    plane = OrientedFrame.from_matrix(A)
    assert np.linalg.det(plane.columns.T @ A) > 0


def test_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        OrientedFrame(np.ones((3, 2)))
    with pytest.raises(ValueError):
        OrientedFrame.from_matrix(np.ones((3, 2)))


def test_retraction_is_a_frame_and_first_order(rng):
    plane = random_plane(6, 3, rng)
    X = tangent_project(plane, rng.normal(size=(6, 3)))
    G = retract(plane, X, 1e-6)
    assert np.abs(G.columns - plane.columns - 1e-6 * X).max() < 1e-10
    assert np.linalg.det(plane.columns.T @ G.columns) > 0


def test_horizontal_basis(rng):
    plane = random_plane(7, 3, rng)
    basis = horizontal_basis(plane)
    assert len(basis) == 12
    M = np.array([b.ravel() for b in basis])
    assert np.allclose(M @ M.T, np.eye(12))
    assert max(np.abs(plane.columns.T @ b).max() for b in basis) < 1e-12
    assert projection_rank(plane) == 12


def test_orthogonal_complement(rng):
    F = random_frames(6, 2, 1, rng)[0]
    C = orthogonal_complement(F)
    Q = np.hstack([F, C])
    assert np.allclose(Q.T @ Q, np.eye(6))


def test_subspace_grassmannian(rng):
    W = random_subspace(7, 4, rng)
    S = SubspaceGrassmannian(W, 3)
    assert S.dim == 3
    plane = S.sample(rng)
    assert S.residual(plane) < 1e-12
    assert S.residual(random_plane(7, 3, rng)) > 1e-3
    with pytest.raises(ValueError):
        SubspaceGrassmannian(W, 5)


def test_plane_sampler_children_are_independent_and_reproducible():
    a, b = PlaneSampler(5, 2, seed=3).spawn(2)
    c, _ = PlaneSampler(5, 2, seed=3).spawn(2)
    assert not np.allclose(a.sample(4), b.sample(4))
    assert np.array_equal(PlaneSampler(5, 2, seed=3).spawn(2)[0].sample(4), c.sample(4))
