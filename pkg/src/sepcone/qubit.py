"""Qubit Hermitian matrices as Lorentz vectors and the multi-qubit
separable-ball harness.

``H(2^k)`` is identified with ``R^{4^k}`` through the orthonormal basis of
scaled Pauli strings ``sigma_P / sqrt(2^k)``; in these coordinates product
operators ``X ⊗ Y`` have coefficient vector ``kron(c(X), c(Y))`` and
``H_+(2)`` becomes the Lorentz cone ``L_4``.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .lorentz import EllipsoidSpec, InvalidDimension, lorentz_gap
from .oracle import decompose_separable
from .radii import matrix_ball_radius, multiqubit_bound

PAULI = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class Hermitian2:
    """``a0 I + a1 sx + a2 sy + a3 sz``."""

    a0: float
    a1: float
    a2: float
    a3: float

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.a2, self.a3], dtype=float)

    def matrix(self) -> np.ndarray:
        return np.tensordot(self.coefficients, PAULI, axes=1)

    @classmethod
    def from_matrix(cls, H) -> "Hermitian2":
        H = np.asarray(H, dtype=complex)
        if H.shape != (2, 2) or not np.allclose(H, H.conj().T, atol=1e-12):
            raise ValueError("expected a 2x2 Hermitian matrix")
        a = [0.5 * np.trace(H @ P).real for P in PAULI]
        return cls(*a)

    def eigenvalues(self) -> tuple[float, float]:
        r = float(np.linalg.norm(self.coefficients[1:]))
        return self.a0 - r, self.a0 + r

    def is_psd(self, tol: float = 1e-12) -> bool:
        return self.eigenvalues()[0] >= -tol

    def frobenius_norm(self) -> float:
        return float(np.sqrt(2.0 * self.coefficients @ self.coefficients))


def herm2_to_lorentz(H: Hermitian2) -> np.ndarray:
    """Norm-preserving coordinates ``sqrt(2) (a0, a1, a2, a3)``."""
    return SQRT2 * H.coefficients


def lorentz_to_herm2(x) -> Hermitian2:
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise InvalidDimension(f"expected a vector of length 4, got shape {x.shape}")
    return Hermitian2(*(x / SQRT2))


@lru_cache(maxsize=8)
def pauli_strings(k: int) -> np.ndarray:
    """All ``4^k`` Pauli strings, first qubit most significant, shape ``(4^k, 2^k, 2^k)``."""
    out = []
    for idx in itertools.product(range(4), repeat=k):
        P = np.array([[1.0 + 0j]])
        for q in idx:
            P = np.kron(P, PAULI[q])
        out.append(P)
    return np.array(out)


def to_coefficients(X) -> np.ndarray:
    """Coordinates of a Hermitian ``2^k x 2^k`` matrix in the orthonormal
    Pauli-string basis."""
    X = np.asarray(X, dtype=complex)
    d = X.shape[0]
    k = int(round(math.log2(d)))
    if X.shape != (d, d) or 2 ** k != d:
        raise InvalidDimension(f"expected a 2^k x 2^k matrix, got shape {X.shape}")
    S = pauli_strings(k)
    # tr(X P) = sum_ij X_ij P_ji
    return np.einsum("ij,pji->p", X, S).real / math.sqrt(d)


def from_coefficients(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    k = int(round(math.log(c.size, 4)))
    if 4 ** k != c.size:
        raise InvalidDimension(f"coefficient vector length {c.size} is not a power of 4")
    return np.tensordot(c, pauli_strings(k), axes=1) / math.sqrt(2 ** k)


@dataclass(frozen=True)
class MultiQubitState:
    k: int
    matrix: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=complex)
        if M.shape != (2 ** self.k, 2 ** self.k):
            raise InvalidDimension(f"expected {2 ** self.k}x{2 ** self.k}, got {M.shape}")
        if not np.allclose(M, M.conj().T, atol=1e-12):
            raise ValueError("matrix is not Hermitian")
        object.__setattr__(self, "matrix", M)

    @classmethod
    def identity(cls, k: int) -> "MultiQubitState":
        return cls(k, np.eye(2 ** k))

    def coefficients(self) -> np.ndarray:
        return to_coefficients(self.matrix)

    def distance_to_identity(self) -> float:
        return float(np.linalg.norm(self.matrix - np.eye(2 ** self.k)))


def random_hermitian_direction(rng: np.random.Generator, d: int) -> np.ndarray:
    """Unit-Frobenius Hermitian matrix ``(G + G^H)/2`` with Gaussian ``G``."""
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    H = 0.5 * (G + G.conj().T)
    return H / np.linalg.norm(H)


# -- recursive constructive check --------------------------------------------


def inner_ball_cone(k_inner: int, radius: float) -> EllipsoidSpec:
    """Cone over ``H(2^k_inner)`` generated by the Frobenius ball of ``radius`` around the identity."""
    return EllipsoidSpec.ball(radius / math.sqrt(2 ** k_inner), 4 ** k_inner)


def inner_radius(k: int, epsilon: float) -> float:
    """Radius of the inner ball used to certify level ``k`` at slack
    ``epsilon``: exact PSD cone for one qubit, otherwise ``(1 - epsilon/2) rho_{k-1}``."""
    if k - 1 == 1:
        return 1.0
    return (1.0 - epsilon / 2.0) * multiqubit_bound(k - 1)


@dataclass
class ProductDecomposition:
    """``c ≈ sum_i w_i kron(f_i1, ..., f_ik)`` with every factor in ``L_4``."""

    weights: np.ndarray
    factors: np.ndarray  # shape (atoms, k, 4)

    def reconstruct(self) -> np.ndarray:
        total = 0.0
        for w, fs in zip(self.weights, self.factors):
            v = fs[0]
            for f in fs[1:]:
                v = np.kron(v, f)
            total = total + w * v
        return np.asarray(total)


def decompose_multiqubit(c, k: int, epsilon: float, tol: float = 1e-9, seed=0,
                         budget: int = 400) -> ProductDecomposition:
    """Split the first qubit off ``c`` against the inner-ball cone, then recurse
    into every inner atom at slack ``epsilon / 2``."""
    c = np.asarray(c, dtype=float)
    if k == 1:
        if lorentz_gap(c) < -1e-12 * max(1.0, abs(c[0])):
            raise ValueError("one-qubit factor is not PSD")
        return ProductDecomposition(np.array([1.0]), c[None, None, :])
    d_inner = 4 ** (k - 1)
    K1 = EllipsoidSpec.lorentz(4)
    K2 = inner_ball_cone(k - 1, inner_radius(k, epsilon))
    B = c.reshape(4, d_inner).T
    dec = decompose_separable(B, K1, K2, budget=budget, tol=tol, seed=seed)
    weights, factors = [], []
    for i, (w, x, y) in enumerate(zip(dec.weights, dec.xs, dec.ys)):
        if k - 1 == 1:
            inner = ProductDecomposition(np.array([1.0]), y[None, None, :])
        else:
            inner = decompose_multiqubit(y, k - 1, epsilon / 2.0, tol, seed=(seed, i), budget=budget)
        for u, fs in zip(inner.weights, inner.factors):
            weights.append(w * u)
            factors.append(np.vstack([x[None, :], fs]))
    return ProductDecomposition(np.array(weights), np.array(factors).reshape(len(weights), k, 4))


@dataclass
class SampleResult:
    index: int
    distance: float
    residual: float
    success: bool
    atoms: int


@dataclass
class MultiQubitReport:
    k: int
    epsilon: float
    rho: float
    samples: list[SampleResult] = field(default_factory=list)

    @property
    def successes(self) -> int:
        return sum(s.success for s in self.samples)

    @property
    def max_residual(self) -> float:
        return max((s.residual for s in self.samples), default=0.0)


def max_threads() -> int:
    try:
        return max(1, int(os.environ.get("SEPCONE_THREADS", "1")))
    except ValueError:
        return 1


def _atoms_valid(dec: ProductDecomposition) -> bool:
    if np.any(dec.weights < 0):
        return False
    for fs in dec.factors:
        for f in fs:
            if not lorentz_to_herm2(f).is_psd(1e-10 * max(1.0, abs(f[0]))):
                return False
    return True


def check_sample(k: int, X, epsilon: float, tol: float, seed) -> tuple[float, bool, int]:
    c = to_coefficients(X)
    dec = decompose_multiqubit(c, k, epsilon, tol=min(tol, 1e-9), seed=seed)
    residual = float(np.linalg.norm(dec.reconstruct() - c))
    ok = residual <= tol * np.linalg.norm(c) and _atoms_valid(dec)
    return residual, bool(ok), len(dec.weights)


def verify_multiqubit_ball(k: int, epsilon: float, samples: int, seed=0, tol: float = 1e-5,
                           threads: int | None = None) -> MultiQubitReport:
    """Constructively decompose Hermitian matrices at Frobenius distance
    ``(1 - epsilon) rho_k`` from the identity into products of one-qubit PSD
    matrices.  Sample 0 is the identity itself."""
    if k not in (2, 3):
        raise ValueError(f"the constructive harness supports k in {{2, 3}}, got {k}")
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    rho = multiqubit_bound(k)
    # the inner slack must still cover the target radius
    reachable = matrix_ball_radius(2, 2 ** (k - 1), 1.0, inner_radius(k, epsilon))
    if reachable < (1.0 - epsilon) * rho:
        raise ValueError("inner slack too small for the requested epsilon")
    d = 2 ** k
    root = np.random.SeedSequence(seed)
    children = root.spawn(samples)

    def job(i):
        rng = np.random.default_rng(children[i])
        if i == 0:
            X = np.eye(d, dtype=complex)
        else:
            X = np.eye(d) + (1.0 - epsilon) * rho * random_hermitian_direction(rng, d)
        dist = float(np.linalg.norm(X - np.eye(d)))
        residual, ok, atoms = check_sample(k, X, epsilon, tol, seed=children[i].entropy + i)
        return SampleResult(i, dist, residual, ok, atoms)

    workers = threads or max_threads()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, range(samples)))
    else:
        results = [job(i) for i in range(samples)]
    return MultiQubitReport(k, epsilon, rho, results)
