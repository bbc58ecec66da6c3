"""Lorentz-to-Lorentz positive maps: certification, witnesses, extreme rays.

A map ``M : R^m -> R^n`` is an ``n x m`` matrix partitioned as
``[[s, h], [v, A]]``.  It is positive when ``M[L_m] ⊆ L_n``.  With ``s = 1``
this holds iff ``|h| <= 1`` and ``M^T J_n M - lam J_m`` is PSD for some
``lam >= 0``.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.optimize import minimize

from .lorentz import (
    DEFAULT_TOL,
    InvalidDimension,
    Membership,
    lorentz_membership,
    minkowski,
    sample_boundary,
)

RANK_RTOL = 1e-10
LAMBDA_ITERS = 200


class ZeroMapError(ValueError):
    """The zero map has no normalization ``s = 1``."""


class NotExtremeWarning(UserWarning):
    """A canonical form was requested in dimensions where it is not extreme."""


@dataclass(frozen=True)
class PartitionedMap:
    matrix: np.ndarray

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2:
            raise InvalidDimension(f"map must be a matrix, got shape {M.shape}")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @classmethod
    def from_blocks(cls, s, h, v, A) -> "PartitionedMap":
        h = np.atleast_1d(np.asarray(h, dtype=float))
        v = np.atleast_1d(np.asarray(v, dtype=float))
        A = np.asarray(A, dtype=float).reshape(v.size, h.size)
        M = np.block([[np.array([[float(s)]]), h[None, :]], [v[:, None], A]])
        return cls(M)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    @property
    def s(self) -> float:
        return float(self.matrix[0, 0])

    @property
    def h(self) -> np.ndarray:
        return self.matrix[0, 1:]

    @property
    def v(self) -> np.ndarray:
        return self.matrix[1:, 0]

    @property
    def A(self) -> np.ndarray:
        return self.matrix[1:, 1:]

    @property
    def T(self) -> "PartitionedMap":
        return PartitionedMap(self.matrix.T)

    def normalized(self) -> "PartitionedMap":
        if self.s == 0:
            raise ZeroMapError("cannot normalize a map with s = 0")
        return PartitionedMap(self.matrix / self.s)

    def __matmul__(self, x):
        return self.matrix @ x

    def __eq__(self, other):
        return isinstance(other, PartitionedMap) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())


def as_map(M) -> PartitionedMap:
    return M if isinstance(M, PartitionedMap) else PartitionedMap(M)


def numerical_rank(M, rtol: float = RANK_RTOL) -> int:
    sv = np.linalg.svd(as_map(M).matrix, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


# -- certification ---------------------------------------------------------


@dataclass(frozen=True)
class PositivityCertificate:
    """``M^T J_n M - lam J_m`` has minimum eigenvalue ``min_eig`` (``M`` scaled to ``s = 1``)."""

    lam: float
    min_eig: float
    h_norm_ok: bool

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NotPositive:
    """Failed certification; ``value`` is the quantity that failed."""

    reason: str
    value: float
    lam: float | None = None

    def __bool__(self) -> bool:
        return False


def lambda_profile(M, lam) -> float:
    """``g(lam) = lambda_min(M^T J_n M - lam J_m)`` for the normalized map."""
    Mn = as_map(M).normalized().matrix
    G = Mn.T @ minkowski(Mn.shape[0]) @ Mn
    return float(np.linalg.eigvalsh(G - lam * minkowski(Mn.shape[1]))[0])


def _check_dims(M: PartitionedMap):
    if min(M.n, M.m) < 2:
        raise InvalidDimension(f"maps need min(m, n) >= 2, got {M.n}x{M.m}")


def certify_positivity(M, tol: float = DEFAULT_TOL) -> PositivityCertificate | NotPositive:
    """S-lemma certificate for ``M[L_m] ⊆ L_n``.

    The multiplier maximizes the concave ``g(lam)`` over ``[0, G_00]`` by
    ternary search, ``G = M^T J_n M`` with ``M`` scaled to ``s = 1``.
    """
    M = as_map(M)
    _check_dims(M)
    if not np.any(M.matrix):
        raise ZeroMapError("the zero map is trivially positive but cannot be normalized")
    if M.s <= 0:
        return NotPositive("s <= 0", M.s)
    Mn = M.matrix / M.s
    h_norm = float(np.linalg.norm(Mn[0, 1:]))
    Jm = minkowski(M.m)
    G = Mn.T @ minkowski(M.n) @ Mn
    if G[0, 0] < -tol:
        return NotPositive("(M^T J M)_00 < 0", float(G[0, 0]), 0.0)

    def g(lam):
        return np.linalg.eigvalsh(G - lam * Jm)[0]

    lo, hi = 0.0, max(float(G[0, 0]), 0.0)
    for _ in range(LAMBDA_ITERS):
        if hi - lo <= 1e-15 * (1.0 + hi):
            break
        a = lo + (hi - lo) / 3.0
        b = hi - (hi - lo) / 3.0
        if g(a) < g(b):
            lo = a
        else:
            hi = b
    lam = 0.5 * (lo + hi)
    min_eig = float(g(lam))
    h_ok = h_norm <= 1.0 + tol
    if min_eig < -tol:
        return NotPositive("min eigenvalue of M^T J M - lam J", min_eig, lam)
    if not h_ok:
        return NotPositive("|h| > s", h_norm)
    return PositivityCertificate(lam, min_eig, h_ok)


def is_positive(M, tol: float = DEFAULT_TOL) -> bool:
    return bool(certify_positivity(M, tol))


# -- witnesses ---------------------------------------------------------------


def _image_gap(Mat: np.ndarray, x: np.ndarray) -> float:
    y = Mat @ x
    return float(y[0] - np.linalg.norm(y[1:]))


def _verified(Mat: np.ndarray, x: np.ndarray, tol: float) -> bool:
    return (
        lorentz_membership(x, tol) is not Membership.OUTSIDE
        and lorentz_membership(Mat @ x, tol) is Membership.OUTSIDE
    )


def witness_candidates(M) -> list[np.ndarray]:
    """Closed-form candidates ``x`` in ``L_m`` that may have ``Mx`` outside ``L_n``."""
    M = as_map(M)
    out = [np.eye(M.m)[0]]
    h = M.h
    if np.linalg.norm(h) > 0:
        out.append(np.r_[1.0, -h / np.linalg.norm(h)])
    if M.s != 0:
        Mn = M.matrix / abs(M.s)
        A, hn, vn = Mn[1:, 1:], Mn[0, 1:], Mn[1:, 0]
        U, sv, Vt = np.linalg.svd(A)
        if sv.size:
            u, w = U[:, 0], Vt[0]
            # orient so that h w - u^T v <= 0
            if hn @ w - u @ vn > 0:
                u, w = -u, -w
            out.append(np.r_[1.0, w])
    return out


def positivity_witness(M, seed=0, restarts: int = 8, tol: float = DEFAULT_TOL) -> np.ndarray | None:
    """Vector ``x`` in ``L_m`` with ``Mx`` outside ``L_n``, or None.

    The image gap ``(Mx)_0 - |(Mx)_rest|`` is concave in ``x``, so its minimum
    over the base ``{x_0 = 1, |w| <= 1}`` sits on the sphere ``|w| = 1``;
    the search runs local descent there from seeded starts.
    """
    M = as_map(M)
    if not np.any(M.matrix):
        return None
    Mat = M.matrix
    for x in witness_candidates(M):
        if _verified(Mat, x, tol):
            return x

    rng = np.random.default_rng(seed)
    pool = sample_boundary(rng, M.m, 256 + 32 * M.m)
    gaps = np.array([_image_gap(Mat, x) for x in pool])
    starts = pool[np.argsort(gaps)[:restarts], 1:]

    def objective(z):
        nz = np.linalg.norm(z)
        if nz == 0:
            return _image_gap(Mat, np.eye(M.m)[0])
        return _image_gap(Mat, np.r_[1.0, z / nz])

    best_x, best_gap = None, np.inf
    for z0 in starts:
        res = minimize(objective, z0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 400 * M.m})
        z = res.x / np.linalg.norm(res.x)
        x = np.r_[1.0, z]
        gap = _image_gap(Mat, x)
        if gap < best_gap:
            best_x, best_gap = x, gap
        if _verified(Mat, x, tol):
            return x
    return None


# -- canonical forms and extreme rays ---------------------------------------


class ExtremeTag(enum.Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"
    NOT_EXTREME = "NotExtreme"
    NOT_POSITIVE = "NotPositive"

    def __str__(self) -> str:
        return self.value


@dataclass
class ExtremeClass:
    tag: ExtremeTag
    evidence: dict[str, Any] = field(default_factory=dict)


def canonical_extreme(kind, m: int, n: int) -> PartitionedMap:
    """Canonical Type I map (ones in the top-left 2x2 block) or Type II map
    (rectangular identity), as ``n x m`` matrices."""
    kind = ExtremeTag(kind) if not isinstance(kind, ExtremeTag) else kind
    if min(m, n) < 2:
        raise InvalidDimension(f"need m, n >= 2, got m={m}, n={n}")
    M = np.zeros((n, m))
    if kind is ExtremeTag.TYPE_I:
        M[:2, :2] = 1.0
    elif kind is ExtremeTag.TYPE_II:
        k = min(m, n)
        M[:k, :k] = np.eye(k)
        if k < 3:
            warnings.warn(f"the rectangular identity is not extreme for min(m, n) = {k}",
                          NotExtremeWarning, stacklevel=2)
    else:
        raise ValueError(f"no canonical form for {kind}")
    return PartitionedMap(M)


def is_rank_one_extreme(M, tol: float = DEFAULT_TOL) -> bool:
    M = as_map(M)
    if numerical_rank(M) != 1:
        return False
    s = M.s
    return bool(abs(np.linalg.norm(M.h) - s) <= tol * abs(s)
                and abs(np.linalg.norm(M.v) - s) <= tol * abs(s))


def doubly_stochastic_check(M, tol: float = DEFAULT_TOL) -> bool:
    M = as_map(M)
    return bool(abs(M.s - 1.0) <= tol and np.linalg.norm(M.h) <= tol
                and np.linalg.norm(M.v) <= tol)


def rank_one_split(M) -> tuple[float, PartitionedMap, PartitionedMap] | None:
    """Write a rank-1 positive map with ``|h| < s`` or ``|v| < s`` as
    ``t M_a + (1 - t) M_b`` with non-proportional positive rank-1 maps."""
    M = as_map(M)
    s = M.s
    if s <= 0:
        return None
    col, row = np.r_[s, M.v], np.r_[s, M.h]
    for transpose in (False, True):
        c, r = (row, col) if transpose else (col, row)
        h = r[1:]
        nh = np.linalg.norm(h)
        if nh >= s * (1 - 1e-12):
            continue
        if nh > 0:
            lam_hi = s / nh
            t = 0.5 * (1.0 + 1.0 / lam_hi)
            ra, rb = np.r_[s, lam_hi * h], np.r_[s, -lam_hi * h]
        else:
            e = np.zeros_like(h)
            e[0] = s
            t = 0.5
            ra, rb = np.r_[s, e], np.r_[s, -e]
        Ma, Mb = np.outer(c, ra) / s, np.outer(c, rb) / s
        if transpose:
            Ma, Mb = Ma.T, Mb.T
        return t, PartitionedMap(Ma), PartitionedMap(Mb)
    return None


def two_dim_split(M) -> tuple[PartitionedMap, PartitionedMap] | None:
    """For ``m = 2`` (or ``n = 2``): ``M = (M_+ + M_-)/2`` with rank-1 positive
    ``M_± = (M e_±)(1, ±1)``, ``e_± = (1, ±1)``."""
    M = as_map(M)
    Mat, transposed = M.matrix, False
    if M.m != 2:
        if M.n != 2:
            return None
        Mat, transposed = Mat.T, True
    ep, em = np.array([1.0, 1.0]), np.array([1.0, -1.0])
    Mp = np.outer(Mat @ ep, ep)
    Mm = np.outer(Mat @ em, em)
    if transposed:
        Mp, Mm = Mp.T, Mm.T
    return PartitionedMap(Mp), PartitionedMap(Mm)


def doubly_stochastic_split(M, tol: float = DEFAULT_TOL):
    """Doubly stochastic ``M`` with ``sigma_min(A) < 1``: endpoints of the
    segment ``alpha -> diag(1, U D(alpha) V)``, ``alpha in [-1, 1]``."""
    M = as_map(M)
    U, sv, Vt = np.linalg.svd(M.A, full_matrices=True)
    k = sv.size
    if k == 0 or sv[-1] >= 1 - tol:
        return None
    def with_last(alpha):
        D = np.zeros_like(M.A)
        d = sv.copy()
        d[-1] = alpha
        D[:k, :k] = np.diag(d)
        out = np.zeros_like(M.matrix)
        out[0, 0] = 1.0
        out[1:, 1:] = U @ D @ Vt
        return PartitionedMap(out)
    t = 0.5 * (1.0 + sv[-1])
    return t, with_last(1.0), with_last(-1.0)


def classify_extreme(M, tol: float = DEFAULT_TOL) -> ExtremeClass:
    """Type I / Type II / NotExtreme / NotPositive.

    Rank > 1 maps are Type II iff ``M^T J_n M = c J_m`` (for ``n >= m``,
    transposing otherwise) with ``c > 0`` and ``min(m, n) >= 3``.
    """
    M = as_map(M)
    sv = np.linalg.svd(M.matrix, compute_uv=False)
    evidence: dict[str, Any] = {"singular_values": sv}
    if not np.any(M.matrix):
        evidence["reason"] = "zero map"
        return ExtremeClass(ExtremeTag.NOT_EXTREME, evidence)
    cert = certify_positivity(M, tol)
    evidence["certificate"] = cert
    if not cert:
        return ExtremeClass(ExtremeTag.NOT_POSITIVE, evidence)
    rank = numerical_rank(M)
    evidence["rank"] = rank
    if rank == 1:
        if is_rank_one_extreme(M, tol):
            return ExtremeClass(ExtremeTag.TYPE_I, evidence)
        evidence["split"] = rank_one_split(M)
        return ExtremeClass(ExtremeTag.NOT_EXTREME, evidence)

    Mat = M.matrix if M.n >= M.m else M.matrix.T
    k = Mat.shape[1]
    G = Mat.T @ minkowski(Mat.shape[0]) @ Mat
    c = float(G[0, 0])
    deviation = float(np.max(np.abs(G - c * minkowski(k))))
    evidence.update(c=c, form_deviation=deviation,
                    A_singular_values=np.linalg.svd(M.normalized().A, compute_uv=False))
    proportional = c > 0 and deviation <= tol * c
    if proportional and min(M.m, M.n) >= 3:
        return ExtremeClass(ExtremeTag.TYPE_II, evidence)
    if min(M.m, M.n) == 2:
        evidence["split"] = two_dim_split(M)
    elif doubly_stochastic_check(M.normalized(), tol):
        evidence["split"] = doubly_stochastic_split(M.normalized(), tol)
    return ExtremeClass(ExtremeTag.NOT_EXTREME, evidence)


def type1_extreme_map(h, v) -> PartitionedMap:
    """Rank-1 extreme map ``(1; -v)(1, -h)`` whose orthogonal face is ``F_I(h, v)``."""
    h = np.asarray(h, dtype=float)
    v = np.asarray(v, dtype=float)
    return PartitionedMap(np.outer(np.r_[1.0, -v], np.r_[1.0, -h]))


def random_map(rng: np.random.Generator, m: int, n: int, h_max=1.0, v_max=1.0, sigma_max=1.0) -> PartitionedMap:
    """Random map with ``s = 1``, ``|h| <= h_max``, ``|v| <= v_max``,
    ``sigma_max(A) <= sigma_max`` (each drawn uniformly up to its cap)."""
    h = rng.standard_normal(m - 1)
    h *= rng.uniform(0, h_max) / np.linalg.norm(h)
    v = rng.standard_normal(n - 1)
    v *= rng.uniform(0, v_max) / np.linalg.norm(v)
    A = rng.standard_normal((n - 1, m - 1))
    A *= rng.uniform(0, sigma_max) / np.linalg.norm(A, 2)
    return PartitionedMap.from_blocks(1.0, h, v, A)


def random_positive_map(rng: np.random.Generator, m: int, n: int, tol: float = 0.0,
                        max_tries: int = 10_000) -> PartitionedMap:
    """Rejection sampling from :func:`random_map` with a strict certificate."""
    for _ in range(max_tries):
        M = random_map(rng, m, n)
        if certify_positivity(M, tol):
            return M
    raise RuntimeError("rejection sampling did not find a positive map")
