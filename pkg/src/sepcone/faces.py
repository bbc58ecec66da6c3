"""Largest faces of the ``L_m ⊗ L_n``-separable cone.

Elements of ``R^m ⊗ R^n`` are ``n x m`` matrices, the product ``x ⊗ y`` is
``y x^T`` and the pairing with a map is ``<B, M> = tr(M^T B)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lorentz import DEFAULT_TOL, InvalidDimension, Membership, lorentz_membership
from .maps import PartitionedMap, canonical_extreme, type1_extreme_map


class InvalidGenerator(ValueError):
    """A face generator is not on the boundary of its Lorentz cone."""


def pairing(B, M) -> float:
    """``tr(M^T B)``."""
    B = np.asarray(getattr(B, "matrix", B), dtype=float)
    M = np.asarray(getattr(M, "matrix", M), dtype=float)
    if B.shape != M.shape:
        raise InvalidDimension(f"shape mismatch {B.shape} vs {M.shape}")
    return float(np.sum(B * M))


@dataclass(frozen=True)
class TypeIFaceSpec:
    """Unit row vector ``h`` (length m-1) and unit column vector ``v`` (length n-1)."""

    h: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        h = np.atleast_1d(np.asarray(self.h, dtype=float))
        v = np.atleast_1d(np.asarray(self.v, dtype=float))
        for name, vec in (("h", h), ("v", v)):
            if abs(np.linalg.norm(vec) - 1.0) > 1e-12:
                raise ValueError(f"{name} must have unit length, got |{name}| = {np.linalg.norm(vec)}")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)

    @property
    def m(self) -> int:
        return self.h.size + 1

    @property
    def n(self) -> int:
        return self.v.size + 1

    @classmethod
    def random(cls, rng: np.random.Generator, m: int, n: int) -> "TypeIFaceSpec":
        h = rng.standard_normal(m - 1)
        v = rng.standard_normal(n - 1)
        return cls(h / np.linalg.norm(h), v / np.linalg.norm(v))

    def extreme_map(self) -> PartitionedMap:
        """The Type I map whose orthogonal face is ``F_I(h, v)``."""
        return type1_extreme_map(self.h, self.v)


def _require_boundary(x, dim, name, tol):
    x = np.asarray(x, dtype=float)
    if x.shape != (dim,):
        raise InvalidDimension(f"{name} must have length {dim}, got shape {x.shape}")
    if lorentz_membership(x, tol) is not Membership.BOUNDARY:
        raise InvalidGenerator(f"{name} = {x} is not on the Lorentz cone boundary")
    return x


def type1_face_element(spec: TypeIFaceSpec, x, y, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``(1; v) x^T + y (1, h)`` for boundary points ``x`` of ``L_m``, ``y`` of ``L_n``."""
    x = _require_boundary(x, spec.m, "x", tol)
    y = _require_boundary(y, spec.n, "y", tol)
    return np.outer(np.r_[1.0, spec.v], x) + np.outer(y, np.r_[1.0, spec.h])


def z1_embed(z, m: int, n: int) -> np.ndarray:
    """Affine map from ``R^{n+m-1}`` onto the span of the standard Type I face.

    Rows: ``(z0, z1-1, z2, ..., z_{m-1})``,
    ``(z_m - 1, 2 - z0 - z1 - z_m, -z2, ..., -z_{m-1})`` and
    ``(z_{m+j-1}, -z_{m+j-1}, 0, ...)`` for ``j = 2..n-1``.
    """
    z = np.asarray(z, dtype=float)
    if z.shape != (n + m - 1,):
        raise InvalidDimension(f"z must have length {n + m - 1}, got shape {z.shape}")
    B = np.zeros((n, m))
    B[0, 0] = z[0]
    B[0, 1] = z[1] - 1.0
    B[0, 2:] = z[2:m]
    B[1, 0] = z[m] - 1.0
    B[1, 1] = 2.0 - z[0] - z[1] - z[m]
    B[1, 2:] = -z[2:m]
    B[2:, 0] = z[m + 1:]
    B[2:, 1] = -z[m + 1:]
    return B


def z1_point(rng: np.random.Generator, m: int, n: int, sphere: int) -> np.ndarray:
    """Random point of ``Z_1`` on the first (``sphere=0``) or second sphere."""
    z = np.zeros(n + m - 1)
    z[0] = 1.0
    if sphere == 0:
        u = rng.standard_normal(m - 1)
        u /= np.linalg.norm(u)
        z[1:m] = u
        z[1] += 1.0
    else:
        u = rng.standard_normal(n - 1)
        u /= np.linalg.norm(u)
        z[m:] = u
        z[m] += 1.0
    return z


def type2_block(B) -> np.ndarray:
    """Top ``min(m, n)`` square block, transposing so that rows >= columns."""
    B = np.asarray(B, dtype=float)
    if B.shape[0] < B.shape[1]:
        B = B.T
    k = B.shape[1]
    return B[:k, :k]


def type2_membership(B, tol: float = DEFAULT_TOL) -> bool:
    """Membership in the standard Type II face: ``B = (A; 0)`` with ``A``
    symmetric PSD and ``A_00 = tr(A)/2``."""
    B = np.asarray(B, dtype=float)
    if B.shape[0] < B.shape[1]:
        B = B.T
    k = B.shape[1]
    A = B[:k, :k]
    scale = max(1.0, abs(np.trace(A)))
    if np.any(np.abs(B[k:]) > tol * scale):
        return False
    if np.max(np.abs(A - A.T), initial=0.0) > tol * scale:
        return False
    As = 0.5 * (A + A.T)
    if np.linalg.eigvalsh(As)[0] < -tol * scale:
        return False
    return abs(As[0, 0] - np.trace(As) / 2.0) <= tol * scale


def type2_generator(h, n: int | None = None) -> np.ndarray:
    """Rank-1 generator ``(1, h; h^T, h^T h)`` padded with ``n - m`` zero rows."""
    h = np.atleast_1d(np.asarray(h, dtype=float))
    a = np.r_[1.0, h]
    G = np.outer(a, a)
    if n is not None and n > a.size:
        G = np.vstack([G, np.zeros((n - a.size, a.size))])
    return G


def type2_face_map(m: int, n: int) -> PartitionedMap:
    """Type II map whose orthogonal face is the standard Type II face above:
    the rectangular identity with ``-1`` on the spatial diagonal."""
    M = np.array(canonical_extreme("TypeII", m, n).matrix)
    k = min(m, n)
    M[1:k, 1:k] *= -1.0
    return PartitionedMap(M)


def face_intersection_witness(spec_a: TypeIFaceSpec, spec_b: TypeIFaceSpec) -> np.ndarray:
    """``(1; v_b)(1, h_a)``, a nonzero element of both ``F_I(h_a, v_a)`` and ``F_I(h_b, v_b)``."""
    if (spec_a.m, spec_a.n) != (spec_b.m, spec_b.n):
        raise InvalidDimension("face specs live in different spaces")
    return np.outer(np.r_[1.0, spec_b.v], np.r_[1.0, spec_a.h])


def type1_type2_witness(spec: TypeIFaceSpec) -> np.ndarray:
    """Element shared by ``F_I(h, v)`` and the standard Type II face (``n >= m``):
    ``(1; h^T; 0)(1, h)``."""
    if spec.n < spec.m:
        raise InvalidDimension("standard Type II face witness assumes n >= m")
    y = np.zeros(spec.n)
    y[0] = 1.0
    y[1:spec.m] = spec.h
    return np.outer(y, np.r_[1.0, spec.h])


def type1_face_dimension(m: int, n: int) -> int:
    """Dimension of the union of relative interiors of Type I faces."""
    return (n + m - 1) + (n - 2) + (m - 2)


def boundary_dimension(m: int, n: int) -> int:
    return n * m - 1
