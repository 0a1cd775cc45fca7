"""Affine subspaces, linear surjections, and kernel calculus.

All bases produced here are orthonormal and deterministic (SVD or Householder
constructions), so downstream coordinates are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import Tolerances, tolerances_or_default
from .errors import DegenerateDirection, DimError, RankError

_ORTHO_TOL = 1e-12


def as_vector(x, dim: int | None = None) -> np.ndarray:
    v = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
    if dim is not None and v.size != dim:
        raise DimError(f"vector has dimension {v.size}, expected {dim}")
    return v


def unit(x) -> np.ndarray:
    v = as_vector(x)
    n = np.linalg.norm(v)
    if n < 1e-14:
        raise DegenerateDirection("direction vector is numerically zero")
    return v / n


def orthonormal_complement(q) -> np.ndarray:
    """Columns form an orthonormal basis of the hyperplane orthogonal to ``q``.

    Householder construction: deterministic, with the sign convention fixed by
    the last coordinate of ``q``.
    """
    qn = unit(q)
    d = qn.size
    e = np.zeros(d)
    e[-1] = 1.0
    sign = 1.0 if qn[-1] >= 0 else -1.0
    v = qn + sign * e
    nv = np.linalg.norm(v)
    if nv < 1e-14:  # q == -e_d exactly
        return np.eye(d)[:, : d - 1]
    v /= nv
    H = np.eye(d) - 2.0 * np.outer(v, v)
    return H[:, : d - 1]


@dataclass(frozen=True)
class AffineSubspace:
    """base_point + span(directions); columns of ``directions`` are orthonormal."""

    base_point: np.ndarray
    directions: np.ndarray  # shape (ambient_dim, subspace_dim)

    def __post_init__(self):
        base = as_vector(self.base_point)
        dirs = np.asarray(self.directions, dtype=float)
        if dirs.ndim == 1:
            dirs = dirs[:, None]
        if dirs.shape[0] != base.size:
            raise DimError("directions and base point live in different dimensions")
        if dirs.shape[1] > dirs.shape[0]:
            raise DimError("more directions than ambient dimensions")
        gram = dirs.T @ dirs
        if dirs.shape[1] and np.abs(gram - np.eye(dirs.shape[1])).max() > 1e-10:
            raise ValueError("subspace directions must be orthonormal")
        object.__setattr__(self, "base_point", base)
        object.__setattr__(self, "directions", dirs)
        base.flags.writeable = False
        dirs.flags.writeable = False

    @property
    def ambient_dim(self) -> int:
        return self.base_point.size

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    def coords(self, x) -> np.ndarray:
        """Coordinates of the projection of ``x`` in the direction basis."""
        return self.directions.T @ (as_vector(x, self.ambient_dim) - self.base_point)

    def embed(self, u) -> np.ndarray:
        """Point of the subspace with coordinates ``u``."""
        return self.base_point + self.directions @ as_vector(u, self.dim)

    @staticmethod
    def from_spanning(base_point, raw_directions, tol: Tolerances | None = None) -> "AffineSubspace":
        """Orthonormalize an arbitrary spanning set (SVD, rank-trimmed)."""
        t = tolerances_or_default(tol)
        base = as_vector(base_point)
        raw = np.atleast_2d(np.asarray(raw_directions, dtype=float))
        if raw.shape[1] != base.size:
            raw = raw.T
        if raw.shape[1] != base.size:
            raise DimError("spanning vectors do not match base point dimension")
        u, s, _ = np.linalg.svd(raw.T, full_matrices=False)
        keep = s > t.rank * max(1.0, s[0] if s.size else 1.0)
        return AffineSubspace(base, u[:, : int(keep.sum())])


def project_affine(x, subspace: AffineSubspace) -> np.ndarray:
    """Orthogonal projection of ``x`` onto the affine subspace."""
    return subspace.embed(subspace.coords(x))


@dataclass(frozen=True)
class LinearSurjection:
    """Surjective linear map y -> matrix @ y between Euclidean spaces.

    The matrix must have full row rank; the pseudo-inverse, kernel basis, and
    smallest singular value are cached at construction.
    """

    matrix: np.ndarray
    _pinv: np.ndarray = field(repr=False, default=None)
    _kernel: np.ndarray = field(repr=False, default=None)
    _sigma_min: float = field(repr=False, default=0.0)

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        k, n = m.shape
        if k > n:
            raise RankError(f"{k}x{n} matrix cannot be surjective")
        u, s, vt = np.linalg.svd(m, full_matrices=True)
        if s.size == 0 or s[-1] <= 1e-10 * s[0]:
            raise RankError("matrix does not have full row rank")
        pinv = (vt[:k].T / s) @ u.T
        kernel = vt[k:].T  # orthonormal columns spanning the null space
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_pinv", pinv)
        object.__setattr__(self, "_kernel", kernel)
        object.__setattr__(self, "_sigma_min", float(s[-1]))
        for a in (m, pinv, kernel):
            a.flags.writeable = False

    @property
    def source_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def target_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def sigma_min(self) -> float:
        return self._sigma_min

    def __call__(self, y) -> np.ndarray:
        return self.matrix @ as_vector(y, self.source_dim)

    def to_json(self) -> dict:
        return {"matrix": [[float(v) for v in row] for row in self.matrix]}

    @staticmethod
    def from_json(data: dict) -> "LinearSurjection":
        return LinearSurjection(np.asarray(data["matrix"], dtype=float))


def kernel_basis(surjection: LinearSurjection) -> np.ndarray:
    """Orthonormal columns spanning ker(L); empty (n, 0) array for injective L."""
    return surjection._kernel


def least_norm_preimage(surjection: LinearSurjection, y) -> np.ndarray:
    """Minimum-norm solution of L x = y (pseudo-inverse applied to y).

    Lipschitz with constant ``1 / sigma_min`` and orthogonal to the kernel.
    """
    return surjection._pinv @ as_vector(y, surjection.target_dim)


def preimage_lipschitz_bound(surjection: LinearSurjection) -> float:
    return 1.0 / surjection.sigma_min


def sum_surjection(dim: int) -> LinearSurjection:
    """The addition map (a, b) -> a + b from R^dim x R^dim onto R^dim."""
    return LinearSurjection(np.hstack([np.eye(dim), np.eye(dim)]))
