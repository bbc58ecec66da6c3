"""Closed-form separable-ball radii and the dual objective they come from."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .lorentz import EllipsoidSpec, InvalidDimension
from .maps import PartitionedMap, as_map

GURVITS_3Q = math.sqrt(8.0 / 11.0)


class Branch(enum.Enum):
    RANK1 = "Rank1"
    DOUBLY_STOCHASTIC = "DoublyStochastic"

    def __str__(self) -> str:
        return self.value


def _spd(P) -> np.ndarray:
    if isinstance(P, EllipsoidSpec):
        return P.P
    P = np.atleast_2d(np.asarray(P, dtype=float))
    return 0.5 * (P + P.T)


def sorted_eigenvalues(P) -> np.ndarray:
    """Eigenvalues of the symmetrized matrix, decreasing."""
    return np.linalg.eigvalsh(_spd(P))[::-1]


def radius_from_aperture(r: float) -> float:
    """Ball radius ``rho`` around a unit vector from the aperture ``r``."""
    return r / math.sqrt(1.0 + r * r)


def aperture_from_radius(rho: float) -> float:
    """``r = rho / sqrt(1 - rho^2)``."""
    if not 0 <= rho < 1:
        raise ValueError(f"radius must lie in [0, 1), got {rho}")
    return rho / math.sqrt(1.0 - rho * rho)


def dual_objective(M, P1, P2, s_tol: float = 1e-12) -> float:
    """``h P1 h^T + v^T P2 v + tr(A^T P2 A P1)`` for a map with ``s = 1``."""
    M = as_map(M)
    P1, P2 = _spd(P1), _spd(P2)
    if P1.shape[0] != M.m - 1 or P2.shape[0] != M.n - 1:
        raise InvalidDimension(
            f"map is {M.n}x{M.m} but P1 is {P1.shape[0]}x{P1.shape[0]}, P2 is {P2.shape[0]}x{P2.shape[0]}")
    if abs(M.s - 1.0) > s_tol:
        raise ValueError(f"dual objective needs s = 1, got s = {M.s}")
    h, v, A = M.h, M.v, M.A
    return float(h @ P1 @ h + v @ P2 @ v + np.sum((P2 @ A @ P1) * A))


def branch_values(P1, P2) -> tuple[float, float]:
    l1, l2 = sorted_eigenvalues(P1), sorted_eigenvalues(P2)
    k = min(l1.size, l2.size)
    rank1 = -1.0 + (1.0 + l1[0]) * (1.0 + l2[0])
    ds = float(np.sum(l1[:k] * l2[:k]))
    return float(rank1), ds


def f_max(P1, P2) -> tuple[float, Branch]:
    """Maximum of the dual objective over normalized positive maps."""
    rank1, ds = branch_values(P1, P2)
    if rank1 >= ds:
        return rank1, Branch.RANK1
    return ds, Branch.DOUBLY_STOCHASTIC


@dataclass(frozen=True)
class RadiusReport:
    rho: float
    r: float
    branch: Branch
    f_max: float


def separable_ball_radius(P1, P2) -> RadiusReport:
    """Largest ``K_st(P1) ⊗ K_st(P2)``-separable ball around ``e_0 ⊗ e_0``."""
    l1, l2 = sorted_eigenvalues(P1), sorted_eigenvalues(P2)
    if l1[-1] <= 0 or l2[-1] <= 0:
        raise ValueError("P1 and P2 must be positive definite")
    k = min(l1.size, l2.size)
    rho = max((1.0 + l1[0]) * (1.0 + l2[0]), 1.0 + float(np.sum(l1[:k] * l2[:k]))) ** -0.5
    value, branch = f_max(P1, P2)
    assert abs(rho - (1.0 + value) ** -0.5) <= 1e-12 * rho
    return RadiusReport(float(rho), float(value ** -0.5), branch, value)


def ball_ball_radius(rho1: float, rho2: float, m: int, n: int) -> float:
    """Largest separable ball around ``e_0 ⊗ e_0`` when the factor cones are
    generated by balls of radii ``rho1``, ``rho2`` around the unit vectors."""
    for name, rho in (("rho1", rho1), ("rho2", rho2)):
        if not 0 < rho < 1:
            raise ValueError(f"{name} must lie in (0, 1), got {rho}")
    if min(m, n) < 2:
        raise InvalidDimension(f"need m, n >= 2, got m={m}, n={n}")
    a, b = rho1 ** -2, rho2 ** -2
    return max(a * b, 1.0 + (min(m, n) - 1) * (a - 1.0) * (b - 1.0)) ** -0.5


def matrix_ball_radius(m: int, n: int, r1: float, r2: float) -> float:
    """Largest separable ball around ``I_{nm}`` in ``H(m) ⊗ H(n)`` when the
    factor cones are generated by Frobenius balls of radii ``r1``, ``r2``
    around ``I_m``, ``I_n``."""
    if not 0 < r1 < math.sqrt(m):
        raise ValueError(f"r1 must lie in (0, sqrt(m)), got {r1}")
    if not 0 < r2 < math.sqrt(n):
        raise ValueError(f"r2 must lie in (0, sqrt(n)), got {r2}")
    prod = r1 * r2
    denom = math.sqrt((min(m * m, n * n) - 1) * (m - r1 * r1) * (n - r2 * r2) + prod * prod)
    return min(prod, math.sqrt(m * n) * prod / denom)


def multiqubit_bound(k: int) -> float:
    """``2^{k/2} / sqrt(3^{k-1} + 1)``, evaluated in logs."""
    if k < 1:
        raise ValueError(f"qubit count must be >= 1, got {k}")
    log_rho = 0.5 * k * math.log(2.0) - 0.5 * ((k - 1) * math.log(3.0) + math.log1p(3.0 ** -(k - 1)))
    return math.exp(log_rho)


def multiqubit_bound_recursive(k: int, log_space_from: int = 40) -> float:
    """Iterate ``rho_k = matrix_ball_radius(2, 2^{k-1}, 1, rho_{k-1})`` from
    ``rho_1 = 1``; past ``log_space_from`` switch to the recurrence
    ``rho_k^{-2} = 1.5 rho_{k-1}^{-2} - 2^{1-k}`` on ``log(rho^{-2})``."""
    if k < 1:
        raise ValueError(f"qubit count must be >= 1, got {k}")
    rho = 1.0
    step = 2
    while step <= min(k, log_space_from):
        rho = matrix_ball_radius(2, 2 ** (step - 1), 1.0, rho)
        step += 1
    if k <= log_space_from:
        return rho
    log_inv2 = -2.0 * math.log(rho)
    for j in range(step, k + 1):
        # log(1.5 e^L - 2^{1-j}) = L + log 1.5 + log1p(-2^{1-j} / (1.5 e^L))
        log_inv2 += math.log(1.5) + math.log1p(-math.exp((1 - j) * math.log(2.0) - math.log(1.5) - log_inv2))
    return math.exp(-0.5 * log_inv2)


def _top_eigvec(P) -> np.ndarray:
    w, V = np.linalg.eigh(_spd(P))
    return V[:, -1]


def rank1_optimizer(P1, P2) -> PartitionedMap:
    """``(1, h; v, v h)`` with ``h``, ``v`` top unit eigenvectors of ``P1``, ``P2``."""
    h, v = _top_eigvec(P1), _top_eigvec(P2)
    return PartitionedMap(np.outer(np.r_[1.0, v], np.r_[1.0, h]))


def ds_optimizer(P1, P2) -> PartitionedMap:
    """``diag(1, U2 D U1^T)``: ``D`` rectangular identity, ``U1``, ``U2`` the
    decreasing eigenbases of ``P1``, ``P2``."""
    P1, P2 = _spd(P1), _spd(P2)
    _, U1 = np.linalg.eigh(P1)
    _, U2 = np.linalg.eigh(P2)
    U1, U2 = U1[:, ::-1], U2[:, ::-1]
    D = np.eye(P2.shape[0], P1.shape[0])
    M = np.zeros((P2.shape[0] + 1, P1.shape[0] + 1))
    M[0, 0] = 1.0
    M[1:, 1:] = U2 @ D @ U1.T
    return PartitionedMap(M)


def branch_optimizer(P1, P2) -> PartitionedMap:
    _, branch = f_max(P1, P2)
    return rank1_optimizer(P1, P2) if branch is Branch.RANK1 else ds_optimizer(P1, P2)


def bound_table(k_max: int) -> list[tuple[int, float, float, float | None]]:
    """Rows ``(k, rho_k, rho_k^2, previous 3-qubit bound or None)``."""
    rows = []
    for k in range(1, k_max + 1):
        rho = multiqubit_bound(k)
        rows.append((k, rho, rho * rho, GURVITS_3Q if k == 3 else None))
    return rows
