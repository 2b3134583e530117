"""Oriented k-planes in R^n represented by orthonormal frames.

A plane is stored as an n-by-k matrix with orthonormal columns; its
orientation is that of the ordered columns.  The Pluecker vector
``e_1 ^ ... ^ e_k`` is derived on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .exterior import MultiVector

ORTHO_TOL = 1e-10


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def orthonormalize(A: np.ndarray) -> np.ndarray:
    """Q factor of a (batched) thin QR with a positive diagonal in R.

    The positive-diagonal convention makes the result unique and keeps the
    orientation of the column span: ``A = Q R`` with ``det R > 0``.
    """
    Q, R = np.linalg.qr(A)
    d = np.sign(np.diagonal(R, axis1=-2, axis2=-1))
    d = np.where(d == 0, 1.0, d)
    return Q * d[..., None, :]


def orthogonal_complement(F: np.ndarray) -> np.ndarray:
    """Orthonormal basis (batched) of the complement of span(F)."""
    n, k = F.shape[-2:]
    Q, _ = np.linalg.qr(F, mode="complete")
    return Q[..., :, k:]


@dataclass(frozen=True, eq=False)
class OrientedFrame:
    """A point of the oriented Grassmannian G_k^+ R^n."""

    columns: np.ndarray

    def __post_init__(self):
        cols = np.array(self.columns, dtype=float)
        if cols.ndim != 2 or cols.shape[1] > cols.shape[0] or cols.shape[1] < 1:
            raise ValueError(f"frame must be n x k with 1 <= k <= n, got shape {cols.shape}")
        gram_err = np.abs(cols.T @ cols - np.eye(cols.shape[1])).max()
        if gram_err > ORTHO_TOL:
            raise ValueError(f"columns are not orthonormal (Gram error {gram_err:.2e})")
        cols.setflags(write=False)
        object.__setattr__(self, "columns", cols)

    @property
    def n(self) -> int:
        return self.columns.shape[0]

    @property
    def k(self) -> int:
        return self.columns.shape[1]

    @classmethod
    def from_matrix(cls, A) -> "OrientedFrame":
        """Orthonormalize ``A`` keeping the orientation of its columns."""
        A = np.asarray(A, dtype=float)
        if np.linalg.matrix_rank(A) < A.shape[1]:
            raise ValueError("columns are linearly dependent")
        return cls(orthonormalize(A))

    @classmethod
    def coordinate(cls, n: int, indices) -> "OrientedFrame":
        """Frame of standard basis vectors, 1-based (``(1, 3, 5)`` -> e_135)."""
        cols = np.zeros((n, len(indices)))
        for j, i in enumerate(indices):
            cols[i - 1, j] = 1.0
        return cls(cols)

    def flipped(self) -> "OrientedFrame":
        """Same plane with the opposite orientation."""
        cols = self.columns.copy()
        if self.k == 1:
            cols[:, 0] *= -1
        else:
            cols[:, [0, 1]] = cols[:, [1, 0]]
        return OrientedFrame(cols)

    def rotated(self, R) -> "OrientedFrame":
        """Image under an ambient orthogonal map."""
        return OrientedFrame(np.asarray(R) @ self.columns)

    def __repr__(self):
        return f"OrientedFrame(n={self.n}, k={self.k})"


def random_frames(n: int, k: int, size: int, seed=None) -> np.ndarray:
    """``size`` Haar-distributed orthonormal frames as an array (size, n, k)."""
    if not (1 <= k <= n):
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = _as_rng(seed)
    return orthonormalize(rng.standard_normal((size, n, k)))


def random_plane(n: int, k: int, seed=None) -> OrientedFrame:
    """A Haar-random oriented k-plane in R^n (deterministic for a given seed)."""
    return OrientedFrame(random_frames(n, k, 1, seed)[0])


class PlaneSampler:
    """Seeded source of random planes that can hand out independent child samplers."""

    def __init__(self, n: int, k: int, seed=None):
        self.n, self.k = n, k
        self._seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        self.rng = np.random.default_rng(self._seq)

    def sample(self, size: int | None = None):
        if size is None:
            return OrientedFrame(random_frames(self.n, self.k, 1, self.rng)[0])
        return random_frames(self.n, self.k, size, self.rng)

    def spawn(self, count: int) -> list["PlaneSampler"]:
        return [PlaneSampler(self.n, self.k, s) for s in self._seq.spawn(count)]


def pluecker_indices(n: int, k: int) -> list[tuple[int, ...]]:
    return [tuple(i + 1 for i in idx) for idx in itertools.combinations(range(n), k)]


def pluecker_coordinates(frames: np.ndarray) -> np.ndarray:
    """All k-by-k minors of a batch of frames, ordered as :func:`pluecker_indices`."""
    frames = np.asarray(frames, dtype=float)
    n, k = frames.shape[-2:]
    rows = list(itertools.combinations(range(n), k))
    sub = frames[..., rows, :]  # (..., C(n,k), k, k)
    return np.linalg.det(sub)


def pluecker(frame: OrientedFrame) -> MultiVector:
    """The unit simple k-vector ``f_1 ^ ... ^ f_k`` of a frame."""
    coords = pluecker_coordinates(frame.columns)
    keys = pluecker_indices(frame.n, frame.k)
    return MultiVector(frame.n, frame.k, dict(zip(keys, coords)))


def tangent_project(frame: OrientedFrame | np.ndarray, A) -> np.ndarray:
    """Horizontal part ``(I - F F^T) A`` of an n-by-k matrix."""
    F = frame.columns if isinstance(frame, OrientedFrame) else np.asarray(frame)
    A = np.asarray(A, dtype=float)
    if A.shape != F.shape:
        raise ValueError(f"shape mismatch: frame {F.shape} vs direction {A.shape}")
    return A - F @ (F.T @ A)


def retract(frame: OrientedFrame, delta, step: float = 1.0) -> OrientedFrame:
    """QR retraction ``qf(F + step * delta)`` preserving orientation."""
    F = frame.columns
    delta = np.asarray(delta, dtype=float)
    if delta.shape != F.shape:
        raise ValueError(f"shape mismatch: frame {F.shape} vs direction {delta.shape}")
    Y = F + step * delta
    s = np.linalg.svd(Y, compute_uv=False)
    if s[-1] < 1e-12 * max(1.0, s[0]):
        raise ValueError(
            f"retraction input is rank deficient (smallest singular value {s[-1]:.2e})"
        )
    return OrientedFrame(orthonormalize(Y))


def horizontal_basis(frame: OrientedFrame) -> list[np.ndarray]:
    """Orthonormal basis of the horizontal space at ``frame``, size k(n-k)."""
    Fp = orthogonal_complement(frame.columns)
    basis = []
    for a in range(Fp.shape[1]):
        for b in range(frame.k):
            E = np.zeros((Fp.shape[1], frame.k))
            E[a, b] = 1.0
            basis.append(Fp @ E)
    return basis


def projection_rank(frame: OrientedFrame, tol: float = 1e-10) -> int:
    """Rank of ``A -> (I - F F^T) A`` acting on all n-by-k matrices."""
    n, k = frame.n, frame.k
    P = np.eye(n) - frame.columns @ frame.columns.T
    op = np.kron(P, np.eye(k))  # acts on row-major vec(A)
    return int(np.linalg.matrix_rank(op, tol=tol))


class SubspaceGrassmannian:
    """Oriented k-planes contained in the span of orthonormal columns ``W``.

    Planes are parametrized by frames in R^d (``d = W.shape[1]``) and embedded
    by ``W @ frame``.
    """

    def __init__(self, W, k: int):
        W = np.asarray(W, dtype=float)
        if W.ndim != 2:
            raise ValueError("W must be a matrix")
        if np.abs(W.T @ W - np.eye(W.shape[1])).max() > ORTHO_TOL:
            raise ValueError("W must have orthonormal columns")
        if k > W.shape[1]:
            raise ValueError(f"k={k} exceeds the subspace dimension {W.shape[1]}")
        if k < 1:
            raise ValueError("k must be positive")
        self.W = W
        self.k = k

    @property
    def n(self) -> int:
        return self.W.shape[0]

    @property
    def d(self) -> int:
        return self.W.shape[1]

    @property
    def dim(self) -> int:
        return self.k * (self.d - self.k)

    def embed(self, local) -> OrientedFrame:
        local = local.columns if isinstance(local, OrientedFrame) else np.asarray(local)
        return OrientedFrame(self.W @ local)

    def sample(self, seed=None, size: int | None = None):
        if size is None:
            return self.embed(random_plane(self.d, self.k, seed))
        return self.W @ random_frames(self.d, self.k, size, seed)

    def residual(self, frame: OrientedFrame) -> float:
        """``||(I - W W^T) F||``, zero for planes inside the subspace."""
        F = frame.columns
        return float(np.linalg.norm(F - self.W @ (self.W.T @ F)))


def random_subspace(n: int, d: int, seed=None) -> np.ndarray:
    """Orthonormal basis of a Haar-random d-dimensional subspace of R^n."""
    return random_frames(n, d, 1, seed)[0]
