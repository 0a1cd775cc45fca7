import numpy as np
import pytest

from svsplit.errors import DegenerateDirection, DimError, RankError
from svsplit.linalg import (
    AffineSubspace,
    LinearSurjection,
    kernel_basis,
    least_norm_preimage,
    orthonormal_complement,
    preimage_lipschitz_bound,
    project_affine,
    sum_surjection,
)


def test_complement_is_orthonormal_and_deterministic():
    rng = np.random.default_rng(3)
    for _ in range(50):
        d = int(rng.integers(2, 7))
        q = rng.standard_normal(d)
        U = orthonormal_complement(q)
        assert U.shape == (d, d - 1)
        assert np.abs(U.T @ U - np.eye(d - 1)).max() < 1e-12
        assert np.abs(U.T @ (q / np.linalg.norm(q))).max() < 1e-12
        assert np.array_equal(U, orthonormal_complement(q))


def test_complement_rejects_zero():
    with pytest.raises(DegenerateDirection):
        orthonormal_complement([0.0, 0.0])


def test_project_affine_line_example():
    # line {y1 + y2 = 2}: projection of the origin is (1, 1)
    line = AffineSubspace([2.0, 0.0], np.array([[1.0], [-1.0]]) / np.sqrt(2.0))
    assert np.allclose(project_affine([0.0, 0.0], line), [1.0, 1.0], atol=1e-12)


def test_affine_subspace_checks_orthonormality():
    with pytest.raises(ValueError):
        AffineSubspace([0.0, 0.0], np.array([[1.0], [1.0]]))
    with pytest.raises(DimError):
        AffineSubspace([0.0, 0.0], np.eye(3))


def test_from_spanning_trims_rank():
    S = AffineSubspace.from_spanning([0.0, 0.0, 1.0], [[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
    assert S.dim == 1
    assert np.allclose(np.abs(S.directions[:, 0]), [1.0, 0.0, 0.0])


def test_coords_embed_roundtrip():
    rng = np.random.default_rng(8)
    S = AffineSubspace.from_spanning(rng.standard_normal(4), rng.standard_normal((2, 4)))
    u = rng.standard_normal(S.dim)
    assert np.allclose(S.coords(S.embed(u)), u, atol=1e-12)


def test_surjection_rejects_rank_deficiency():
    with pytest.raises(RankError):
        LinearSurjection([[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(RankError):
        LinearSurjection(np.zeros((1, 3)))


def test_sum_map_kernel_and_preimage():
    L = sum_surjection(1)
    K = kernel_basis(L)
    assert K.shape == (2, 1)
    assert np.allclose(np.abs(K[:, 0]), [1.0, 1.0] / np.sqrt(2.0))
    for y in (-1.0, 0.0, 1.0, 10.0):
        w = least_norm_preimage(L, [y])
        assert np.allclose(w, [y / 2.0, y / 2.0], atol=1e-12)


def test_preimage_orthogonal_to_kernel():
    rng = np.random.default_rng(15)
    for _ in range(40):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n))
        L = LinearSurjection(rng.standard_normal((k, n)))
        w = least_norm_preimage(L, rng.standard_normal(k))
        K = kernel_basis(L)
        assert K.shape == (n, n - k)
        if K.size:
            assert np.abs(K.T @ w).max() <= 1e-9


def test_preimage_lipschitz_bound_holds():
    rng = np.random.default_rng(23)
    for _ in range(30):
        L = LinearSurjection(rng.standard_normal((2, 4)))
        bound = preimage_lipschitz_bound(L)
        y1, y2 = rng.standard_normal((2, 2))
        lhs = np.linalg.norm(least_norm_preimage(L, y1) - least_norm_preimage(L, y2))
        assert lhs <= bound * np.linalg.norm(y1 - y2) + 1e-12


def test_surjection_json_roundtrip():
    L = LinearSurjection([[1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0]])
    L2 = LinearSurjection.from_json(L.to_json())
    assert np.array_equal(L.matrix, L2.matrix)
