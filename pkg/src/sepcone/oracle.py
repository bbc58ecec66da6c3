"""Independent checks: separable decompositions, dual witnesses, search for
the dual maximum, first-order conditions and extremality margins."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .lorentz import EllipsoidSpec, InvalidDimension, boost
from .maps import PartitionedMap, as_map, certify_positivity, random_map
from .radii import branch_optimizer, dual_objective, ds_optimizer, f_max, rank1_optimizer


def _spec(K, d: int) -> EllipsoidSpec:
    if K is None:
        return EllipsoidSpec.lorentz(d)
    if not isinstance(K, EllipsoidSpec):
        K = EllipsoidSpec(K)
    if K.d != d:
        raise InvalidDimension(f"cone has dimension {K.d}, expected {d}")
    return K


def _boundary_point(rest_dir: np.ndarray, K: EllipsoidSpec) -> np.ndarray:
    """``(1, z)`` with ``z^T P z = 1`` along ``rest_dir``."""
    q = np.sqrt(rest_dir @ K.P @ rest_dir)
    return np.r_[1.0, rest_dir / q]


def sample_product(seed, K1: EllipsoidSpec, K2: EllipsoidSpec):
    """Random ``x`` on the boundary of ``K1``, ``y`` on that of ``K2`` (both with
    leading entry 1) and the product element ``y x^T``."""
    rng = np.random.default_rng(seed)
    x = _boundary_point(rng.standard_normal(K1.d - 1), K1)
    y = _boundary_point(rng.standard_normal(K2.d - 1), K2)
    return x, y, np.outer(y, x)


# -- conditional-gradient decomposition ---------------------------------------


@dataclass
class SeparableDecomposition:
    weights: np.ndarray
    xs: np.ndarray  # one generator per row, shape (k, m)
    ys: np.ndarray  # shape (k, n)
    residual: float
    success: bool
    iterations: int = 0
    target_norm: float = 0.0

    def __len__(self) -> int:
        return self.weights.size

    def reconstruct(self) -> np.ndarray:
        return np.einsum("k,ki,kj->ij", self.weights, self.ys, self.xs)

    def scaled(self, c: float) -> "SeparableDecomposition":
        return SeparableDecomposition(c * self.weights, self.xs, self.ys, c * self.residual,
                                      self.success, self.iterations, c * self.target_norm)


def _support(u: np.ndarray, Pinv: np.ndarray) -> tuple[np.ndarray, float]:
    """Maximizer and value of ``u . z`` over ``z^T P z <= 1``."""
    q = Pinv @ u
    val = float(np.sqrt(max(u @ q, 0.0)))
    if val == 0.0:
        return np.zeros_like(u), 0.0
    return q / val, val


def product_lmo(R: np.ndarray, K1: EllipsoidSpec, K2: EllipsoidSpec, rng: np.random.Generator,
                restarts: int = 8, sweeps: int = 100):
    """Approximately maximize ``y^T R x`` over boundary generators with
    ``x_0 = y_0 = 1`` by alternating closed-form support steps."""
    P1inv, P2inv = K1.inv(), K2.inv()
    best = (-np.inf, None, None)
    for _ in range(restarts):
        x = _boundary_point(rng.standard_normal(K1.d - 1), K1)
        prev = -np.inf
        for _ in range(sweeps):
            u = R @ x
            zy, _ = _support(u[1:], P2inv)
            y = np.r_[1.0, zy]
            t = R.T @ y
            zx, _ = _support(t[1:], P1inv)
            x = np.r_[1.0, zx]
            val = float(y @ R @ x)
            if val - prev <= 1e-15 * (1.0 + abs(val)):
                break
            prev = val
        if val > best[0]:
            best = (val, x, y)
    return best


def _product_atom(B, K1: EllipsoidSpec, K2: EllipsoidSpec, rtol: float = 1e-12):
    """``(w, x, y)`` if ``B = w y x^T`` is numerically rank one with both
    factors in their cones, else ``None``."""
    U, sv, Vt = np.linalg.svd(B)
    if sv[0] == 0.0 or (sv.size > 1 and sv[1] > rtol * sv[0]):
        return None
    y, x = U[:, 0], Vt[0]
    if y[0] < 0:
        y, x = -y, -x
    if y[0] <= 0 or x[0] <= 0:
        return None
    x, y = x / x[0], y / y[0]
    if K1.gap(x) < -1e-12 or K2.gap(y) < -1e-12:
        return None
    w = float(y @ B @ x) / float((x @ x) * (y @ y))
    return np.array([w]), x[None, :], y[None, :]


def decompose_separable(B, K1=None, K2=None, budget: int = 500, tol: float = 1e-8, seed=0,
                        restarts: int = 8, refit_every: int = 10) -> SeparableDecomposition:
    """Conic conditional-gradient decomposition ``B ≈ sum_i w_i y_i x_i^T``.

    Each iteration adds the generator returned by :func:`product_lmo` with a
    line-searched weight; every ``refit_every`` iterations all weights are
    re-fitted by nonnegative least squares and zero-weight atoms dropped.
    ``success`` means ``|B - recon|_F <= tol |B|_F``; a failure only reports
    the best residual and says nothing about separability.
    """
    B = np.asarray(B, dtype=float)
    n, m = B.shape
    K1, K2 = _spec(K1, m), _spec(K2, n)
    rng = np.random.default_rng(seed)
    nB = float(np.linalg.norm(B))
    xs = np.zeros((0, m))
    ys = np.zeros((0, n))
    w = np.zeros(0)
    if nB == 0.0:
        return SeparableDecomposition(w, xs, ys, 0.0, True, 0, 0.0)

    def finish(w, xs, ys, it):
        R = B - np.einsum("k,ki,kj->ij", w, ys, xs)
        res = float(np.linalg.norm(R))
        return SeparableDecomposition(w, xs, ys, res, res <= tol * nB, it, nB)

    def refit(xs, ys):
        G = np.einsum("ki,kj->ijk", ys, xs).reshape(n * m, -1)
        w, _ = nnls(G, B.ravel(), maxiter=50 * max(G.shape[1], 1))
        keep = w > 0
        return w[keep], xs[keep], ys[keep]

    single = _product_atom(B, K1, K2)
    if single is not None:
        return finish(*single, 0)

    R = B.copy()
    it = 0
    fresh = True  # R is the residual of a full refit
    for it in range(1, budget + 1):
        val, x, y = product_lmo(R, K1, K2, rng, restarts)
        stalled = val <= 1e-15 * nB
        if stalled and fresh:
            break
        if not stalled:
            G = np.outer(y, x)
            step = val / float(np.sum(G * G))
            xs = np.vstack([xs, x])
            ys = np.vstack([ys, y])
            w = np.r_[w, step]
            R = R - step * G
            fresh = False
        if stalled or it % refit_every == 0 or np.linalg.norm(R) <= tol * nB:
            if w.size:
                w, xs, ys = refit(xs, ys)
            R = B - np.einsum("k,ki,kj->ij", w, ys, xs)
            fresh = True
            if np.linalg.norm(R) <= tol * nB:
                break
    if w.size:
        w, xs, ys = refit(xs, ys)
    return finish(w, xs, ys, it)


# -- dual witnesses ------------------------------------------------------------


class Verdict(enum.Enum):
    CERTIFIED_NON_SEPARABLE = "CertifiedNonSeparable"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class WitnessVerdict:
    pairing: float
    map_positive: bool
    verdict: Verdict


def to_lorentz_map(M, K1: EllipsoidSpec, K2: EllipsoidSpec) -> PartitionedMap:
    """``diag(1, P2^{-1/2}) M diag(1, P1^{-1/2})``: positive ``L_m -> L_n``
    exactly when ``M`` maps ``K_st(P1)`` into the dual of ``K_st(P2)``."""
    M = as_map(M)
    T2 = np.eye(K2.d)
    T2[1:, 1:] = K2.inv_sqrt()
    return PartitionedMap(T2 @ M.matrix @ K1.from_lorentz())


def from_lorentz_map(M, K1: EllipsoidSpec, K2: EllipsoidSpec) -> PartitionedMap:
    """Inverse of :func:`to_lorentz_map`."""
    M = as_map(M)
    T1 = np.eye(K1.d)
    T1[1:, 1:] = K1.sqrt()
    T2 = np.eye(K2.d)
    T2[1:, 1:] = K2.sqrt()
    return PartitionedMap(T2 @ M.matrix @ T1)


def dual_witness(B, M, tol: float = 1e-9, K1=None, K2=None) -> WitnessVerdict:
    """``<B, M>``; negative with a certified dual element ``M`` proves ``B``
    is not separable."""
    B = np.asarray(B, dtype=float)
    M = as_map(M)
    if B.shape != M.matrix.shape:
        raise InvalidDimension(f"element is {B.shape}, map is {M.matrix.shape}")
    n, m = B.shape
    K1, K2 = _spec(K1, m), _spec(K2, n)
    p = float(np.sum(B * M.matrix))
    positive = bool(certify_positivity(to_lorentz_map(M, K1, K2), tol))
    verdict = Verdict.CERTIFIED_NON_SEPARABLE if positive and p < -tol else Verdict.INCONCLUSIVE
    return WitnessVerdict(p, positive, verdict)


def touching_witness(P1, P2) -> tuple[PartitionedMap, np.ndarray]:
    """Dual element ``W`` attaining the radius and the unit direction ``W/|W|``.

    ``<e_0 ⊗ e_0 - t W/|W|, W> = 1 - t |W|`` vanishes at ``t = rho``.
    """
    K1, K2 = EllipsoidSpec(P1), EllipsoidSpec(P2)
    W = from_lorentz_map(branch_optimizer(K1.P, K2.P), K1, K2)
    return W, W.matrix / np.linalg.norm(W.matrix)


def center(m: int, n: int) -> np.ndarray:
    E = np.zeros((n, m))
    E[0, 0] = 1.0
    return E


# -- dual maximum search -----------------------------------------------------


def random_search_fmax(P1, P2, budget: int = 400, seed=0, trace: list | None = None) -> float:
    """Best dual objective over the two constructed optimizers, rejection-sampled
    positive maps and a certified coordinate ascent.  Sampled maps are
    accepted only with a strict (``tol = 0``) certificate."""
    P1 = np.atleast_2d(np.asarray(P1, dtype=float))
    P2 = np.atleast_2d(np.asarray(P2, dtype=float))
    m, n = P1.shape[0] + 1, P2.shape[0] + 1
    rng = np.random.default_rng(seed)
    best = -np.inf
    count = 0

    def record(source, value):
        nonlocal best, count
        count += 1
        best = max(best, value)
        if trace is not None:
            trace.append((count, source, value, best))

    for name, M in (("rank1_optimizer", rank1_optimizer(P1, P2)), ("ds_optimizer", ds_optimizer(P1, P2))):
        record(name, dual_objective(M, P1, P2))

    n_random = max(budget // 2, 1)
    start, start_val = None, -np.inf
    for _ in range(n_random):
        M = random_map(rng, m, n)
        if certify_positivity(M, 0.0):
            val = dual_objective(M, P1, P2)
            record("random", val)
            if val > start_val:
                start, start_val = M, val
    if start is None:
        return best

    X = np.array(start.matrix)
    cur = start_val
    step = 0.1
    coords = [(i, j) for i in range(n) for j in range(m) if (i, j) != (0, 0)]
    for _ in range(budget - n_random):
        i, j = coords[rng.integers(len(coords))]
        improved = False
        for sign in (1.0, -1.0):
            Y = X.copy()
            Y[i, j] += sign * step
            if certify_positivity(Y, 0.0):
                val = dual_objective(Y, P1, P2)
                if val > cur:
                    X, cur, improved = Y, val, True
                    record("ascent", val)
                    break
        if not improved:
            step = max(step * 0.7, 1e-6)
    return best


# -- first-order conditions --------------------------------------------------


def stationarity_residual(M, P1, P2) -> tuple[float, float]:
    """Norms of ``A P1 h^T - [(I + P2)^{-1} F - I] v`` and
    ``A^T P2 v - [(I + P1)^{-1} F - I] h^T`` with ``F = 1 + dual objective``."""
    M = as_map(M)
    P1 = np.atleast_2d(np.asarray(P1, dtype=float))
    P2 = np.atleast_2d(np.asarray(P2, dtype=float))
    F = 1.0 + dual_objective(M, P1, P2)
    h, v, A = M.h, M.v, M.A
    I1, I2 = np.eye(P1.shape[0]), np.eye(P2.shape[0])
    r1 = A @ P1 @ h - (F * np.linalg.inv(I2 + P2) - I2) @ v
    r2 = A.T @ P2 @ v - (F * np.linalg.inv(I1 + P1) - I1) @ h
    return float(np.linalg.norm(r1)), float(np.linalg.norm(r2))


def left_family(M, b) -> PartitionedMap:
    """``U_n(b) M / (U_n(b) M)_00``."""
    M = as_map(M)
    X = boost(b, M.n).matrix @ M.matrix
    return PartitionedMap(X / X[0, 0])


def right_family(M, b) -> PartitionedMap:
    """``M U_m(b) / (M U_m(b))_00``."""
    M = as_map(M)
    X = M.matrix @ boost(b, M.m).matrix
    return PartitionedMap(X / X[0, 0])


def left_objective(M, b, P1, P2) -> float:
    return dual_objective(left_family(M, b), P1, P2, s_tol=1e-9)


def right_objective(M, b, P1, P2) -> float:
    return dual_objective(right_family(M, b), P1, P2, s_tol=1e-9)


def left_gradient(M, P1, P2) -> np.ndarray:
    """Gradient at ``b = 0``: ``2[(I + P2) A P1 h^T + (P2 - F I) v]``."""
    M = as_map(M)
    P1 = np.atleast_2d(P1)
    P2 = np.atleast_2d(P2)
    F = dual_objective(M, P1, P2)
    I2 = np.eye(P2.shape[0])
    return 2.0 * ((I2 + P2) @ M.A @ P1 @ M.h + (P2 - F * I2) @ M.v)


def right_gradient(M, P1, P2) -> np.ndarray:
    """Gradient at ``b = 0``: ``2[(I + P1) A^T P2 v + (P1 - F I) h^T]``."""
    M = as_map(M)
    P1 = np.atleast_2d(P1)
    P2 = np.atleast_2d(P2)
    F = dual_objective(M, P1, P2)
    I1 = np.eye(P1.shape[0])
    return 2.0 * ((I1 + P1) @ M.A.T @ P2 @ M.v + (P1 - F * I1) @ M.h)


def finite_difference_gradient(f, dim: int, step: float = 1e-5) -> np.ndarray:
    g = np.zeros(dim)
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = step
        g[i] = (f(e) - f(-e)) / (2.0 * step)
    return g


# -- extremality margins -----------------------------------------------------


def extremality_margin(M, delta, eps_max: float = 1.0, tol: float = 1e-12, iters: int = 40) -> float:
    """Largest ``eps <= eps_max`` with ``M ± eps*delta`` both certified positive
    (the feasible set is an interval by convexity)."""
    Mat = as_map(M).matrix
    D = np.asarray(delta, dtype=float)

    def ok(eps):
        return bool(certify_positivity(Mat + eps * D, tol)) and bool(certify_positivity(Mat - eps * D, tol))

    if ok(eps_max):
        return eps_max
    lo, hi = 0.0, eps_max
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def orthogonal_unit(M, delta) -> np.ndarray:
    Mat = as_map(M).matrix
    D = np.asarray(delta, dtype=float)
    D = D - np.sum(D * Mat) / np.sum(Mat * Mat) * Mat
    return D / np.linalg.norm(D)


def perturbation_search(M, trials: int = 64, seed=0, tol: float = 1e-12) -> tuple[float, np.ndarray]:
    """Largest margin over random unit directions orthogonal to ``M``
    (``M`` scaled to unit Frobenius norm)."""
    Mat = as_map(M).matrix
    Mat = Mat / np.linalg.norm(Mat)
    rng = np.random.default_rng(seed)
    best, best_d = -1.0, None
    for _ in range(trials):
        D = orthogonal_unit(Mat, rng.standard_normal(Mat.shape))
        eps = extremality_margin(Mat, D, tol=tol, iters=30)
        if eps > best:
            best, best_d = eps, D
    return best, best_d
