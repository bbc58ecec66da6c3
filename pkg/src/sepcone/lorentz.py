"""Lorentz and ellipsoidal cone primitives.

Vectors are plain 1-d numpy arrays with the distinguished coordinate first,
``x = (x_0, x_1, ..., x_{d-1})``.  The Lorentz cone is
``L_d = {x : x_0 >= |(x_1, ..., x_{d-1})|}`` and the standardized ellipsoidal
cone is ``K_st(P) = {x : x_0 >= sqrt(x_rest^T P x_rest)}``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9


class InvalidDimension(ValueError):
    """Raised when a cone operation receives a vector of unsupported size."""


class Membership(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"

    def __str__(self) -> str:
        return self.value


def as_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidDimension(f"expected a 1-d vector, got shape {x.shape}")
    return x


def minkowski(dim: int) -> np.ndarray:
    """The form ``diag(1, -1, ..., -1)`` of size ``dim``."""
    if dim < 1:
        raise InvalidDimension(f"dimension must be positive, got {dim}")
    J = -np.eye(dim)
    J[0, 0] = 1.0
    return J


def minkowski_quad(x) -> float:
    """``x^T J x``."""
    x = as_vector(x)
    return float(x[0] ** 2 - x[1:] @ x[1:])


def _classify(gap: float, tol: float) -> Membership:
    # the apex 0 has gap 0 and is reported as Boundary
    if gap > tol:
        return Membership.INTERIOR
    if gap >= -tol:
        return Membership.BOUNDARY
    return Membership.OUTSIDE


def lorentz_gap(x) -> float:
    """Signed margin ``x_0 - |x_rest|``; nonnegative exactly on ``L_d``."""
    x = as_vector(x)
    if x.size < 2:
        raise InvalidDimension(f"Lorentz cone needs dimension >= 2, got {x.size}")
    return float(x[0] - np.linalg.norm(x[1:]))


def lorentz_membership(x, tol: float = DEFAULT_TOL) -> Membership:
    """Classify ``x`` against ``L_d`` with absolute tolerance ``tol`` on the gap."""
    x = as_vector(x)
    return _classify(lorentz_gap(x), tol)


@dataclass(frozen=True)
class EllipsoidSpec:
    """Standardized ellipsoidal cone ``K_st(P)`` in ``R^d``, ``P`` of size ``d-1``."""

    P: np.ndarray

    def __post_init__(self):
        P = np.atleast_2d(np.asarray(self.P, dtype=float))
        if P.shape[0] != P.shape[1]:
            raise ValueError(f"P must be square, got shape {P.shape}")
        P = 0.5 * (P + P.T)
        if P.shape[0] == 0 or np.linalg.eigvalsh(P)[0] <= 0:
            raise ValueError("P must be positive definite")
        object.__setattr__(self, "P", P)

    @property
    def d(self) -> int:
        return self.P.shape[0] + 1

    @classmethod
    def lorentz(cls, d: int) -> "EllipsoidSpec":
        return cls(np.eye(d - 1))

    @classmethod
    def ball(cls, rho: float, d: int) -> "EllipsoidSpec":
        """Cone generated by the ball of radius ``rho < 1`` around ``e_0``."""
        if not 0 < rho < 1:
            raise ValueError(f"ball radius must lie in (0, 1), got {rho}")
        return cls((rho ** -2 - 1.0) * np.eye(d - 1))

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues of ``P`` in decreasing order."""
        return np.linalg.eigvalsh(self.P)[::-1]

    def sqrt(self) -> np.ndarray:
        w, V = np.linalg.eigh(self.P)
        return (V * np.sqrt(w)) @ V.T

    def inv_sqrt(self) -> np.ndarray:
        w, V = np.linalg.eigh(self.P)
        return (V / np.sqrt(w)) @ V.T

    def inv(self) -> np.ndarray:
        return np.linalg.inv(self.P)

    def from_lorentz(self) -> np.ndarray:
        """``diag(1, P^{-1/2})``, mapping ``L_d`` onto ``K_st(P)``."""
        T = np.eye(self.d)
        T[1:, 1:] = self.inv_sqrt()
        return T

    def gap(self, x) -> float:
        x = as_vector(x)
        if x.size != self.d:
            raise InvalidDimension(f"vector has dimension {x.size}, cone has {self.d}")
        r = x[1:]
        return float(x[0] - np.sqrt(max(r @ self.P @ r, 0.0)))


def ellipsoid_membership(x, K: EllipsoidSpec, tol: float = DEFAULT_TOL) -> Membership:
    x = as_vector(x)
    return _classify(K.gap(x), tol)


@dataclass(frozen=True)
class LorentzAutomorphism:
    """Linear map ``U`` with ``U^T J U = scale * J`` and ``U[L_d] = L_d``."""

    matrix: np.ndarray
    scale: float = 1.0

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def form_defect(self) -> float:
        J = minkowski(self.dim)
        U = self.matrix
        return float(np.max(np.abs(U.T @ J @ U - self.scale * J)))

    def __matmul__(self, other):
        if isinstance(other, LorentzAutomorphism):
            return LorentzAutomorphism(self.matrix @ other.matrix, self.scale * other.scale)
        return self.matrix @ other

    @property
    def inverse(self) -> "LorentzAutomorphism":
        return LorentzAutomorphism(np.linalg.inv(self.matrix), 1.0 / self.scale)


def boost(b, dim: int | None = None) -> LorentzAutomorphism:
    """Form-preserving boost with first column ``(sqrt(1+|b|^2), b)``.

    ``U(b) = [[c, b S / c], [b^T, S]]`` with ``c = sqrt(1 + |b|^2)`` and
    ``S = (I - b^T b / c^2)^{-1/2} = I + (c - 1) b^T b / |b|^2``.  The
    derivative at ``b = 0`` is ``[[0, db], [db^T, 0]]``.
    """
    b = np.atleast_1d(np.asarray(b, dtype=float)).ravel()
    if dim is None:
        dim = b.size + 1
    if b.size != dim - 1:
        raise InvalidDimension(f"boost vector must have length {dim - 1}, got {b.size}")
    nb2 = float(b @ b)
    c = np.sqrt(1.0 + nb2)
    S = np.eye(dim - 1)
    if nb2 > 0:
        S += (c - 1.0) * np.outer(b, b) / nb2
    U = np.empty((dim, dim))
    U[0, 0] = c
    U[0, 1:] = b @ S / c
    U[1:, 0] = b
    U[1:, 1:] = S
    return LorentzAutomorphism(U, 1.0)


def rotation(Q) -> LorentzAutomorphism:
    """``diag(1, Q)`` for an orthogonal ``Q``."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    U = np.eye(Q.shape[0] + 1)
    U[1:, 1:] = Q
    return LorentzAutomorphism(U, 1.0)


def random_orthogonal(rng: np.random.Generator, k: int) -> np.ndarray:
    """Haar-distributed orthogonal ``k x k`` matrix (QR with sign fix)."""
    Z = rng.standard_normal((k, k))
    Q, R = np.linalg.qr(Z)
    return Q * np.sign(np.diag(R))


def random_automorphism(seed, dim: int) -> LorentzAutomorphism:
    """Seeded ``t * boost(b) @ diag(1, Q)`` with ``|b| ~ U[0, 2]``, ``t ~ U[0.5, 2]``."""
    if dim < 2:
        raise InvalidDimension(f"dimension must be >= 2, got {dim}")
    rng = np.random.default_rng(seed)
    direction = rng.standard_normal(dim - 1)
    direction /= np.linalg.norm(direction)
    b = rng.uniform(0.0, 2.0) * direction
    Q = random_orthogonal(rng, dim - 1)
    t = rng.uniform(0.5, 2.0)
    U = boost(b, dim) @ rotation(Q)
    return LorentzAutomorphism(t * U.matrix, t * t)


def sample_boundary(rng: np.random.Generator, dim: int, count: int) -> np.ndarray:
    """``count`` points ``(1, w)`` with ``|w| = 1``, one per row."""
    W = rng.standard_normal((count, dim - 1))
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    return np.hstack([np.ones((count, 1)), W])


def sample_interior(rng: np.random.Generator, dim: int, count: int, margin: float = 0.05) -> np.ndarray:
    """Points ``(1, w)`` with ``|w| <= 1 - margin``."""
    X = sample_boundary(rng, dim, count)
    radii = (1.0 - margin) * rng.uniform(0.0, 1.0, size=count) ** (1.0 / max(dim - 1, 1))
    X[:, 1:] *= radii[:, None]
    return X


def apply_map(M, x) -> np.ndarray:
    """Matrix-vector product with a dimension check."""
    Mat = getattr(M, "matrix", M)
    Mat = np.asarray(Mat, dtype=float)
    x = as_vector(x)
    if Mat.shape[1] != x.size:
        raise InvalidDimension(f"map has {Mat.shape[1]} columns, vector has {x.size} entries")
    return Mat @ x
