"""Primal-dual sandwich of the separable-ball radius.

For random shape matrices, points at ``t * rho`` around the centre are pushed
through the decomposer (primal side) and the point along the touching
direction is tested against the optimal dual map (dual side).
"""

import argparse
import time

import numpy as np

from sepcone.lorentz import EllipsoidSpec, random_orthogonal
from sepcone.oracle import Verdict, center, decompose_separable, dual_witness, touching_witness
from sepcone.radii import separable_ball_radius


def random_spd(rng, k):
    Q = random_orthogonal(rng, k)
    return (Q * rng.uniform(0.2, 3.0, k)) @ Q.T


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--points", type=int, default=10)
    ap.add_argument("--lorentz", action="store_true", help="use P1 = P2 = I")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    m, n = args.m, args.n
    if args.lorentz:
        P1, P2 = np.eye(m - 1), np.eye(n - 1)
    else:
        P1, P2 = random_spd(rng, m - 1), random_spd(rng, n - 1)
    K1, K2 = EllipsoidSpec(P1), EllipsoidSpec(P2)
    rep = separable_ball_radius(P1, P2)
    W, direction = touching_witness(P1, P2)
    E = center(m, n)
    print(f"rho = {rep.rho:.10f}  branch = {rep.branch}  f_max = {rep.f_max:.6f}")
    print(f"{'t':>5} {'decomposed':>11} {'max residual':>13} {'touching point':>22} {'secs':>6}")
    for t in (0.9, 0.99, 1.01, 1.1):
        t0 = time.perf_counter()
        ok, worst = 0, 0.0
        for i in range(args.points):
            D = -direction if i == 0 else rng.standard_normal((n, m))
            D = D / np.linalg.norm(D)
            dec = decompose_separable(E + t * rep.rho * D, K1, K2, budget=800, tol=1e-9, seed=i)
            ok += dec.success
            worst = max(worst, dec.residual)
        verdict = dual_witness(E - t * rep.rho * direction, W, K1=K1, K2=K2).verdict
        print(f"{t:5.2f} {ok:>5}/{args.points:<5} {worst:13.2e} {str(verdict):>22} "
              f"{time.perf_counter() - t0:6.1f}")
    assert verdict is Verdict.CERTIFIED_NON_SEPARABLE


if __name__ == "__main__":
    main()
