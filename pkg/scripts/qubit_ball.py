"""Constructive check of the multi-qubit separable ball at a few slacks."""

import argparse
import time

from sepcone.qubit import verify_multiqubit_ball


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--epsilon", type=float, nargs="+", default=[0.2, 0.05, 0.01])
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()
    print(f"{'k':>2} {'eps':>6} {'rho_k':>10} {'ok':>7} {'max residual':>13} {'atoms':>7} {'secs':>7}")
    for k in args.k:
        for eps in args.epsilon:
            t0 = time.perf_counter()
            rep = verify_multiqubit_ball(k, eps, args.samples, seed=args.seed, threads=args.threads)
            atoms = max(s.atoms for s in rep.samples)
            print(f"{k:>2} {eps:6.3f} {rep.rho:10.6f} {rep.successes:>3}/{len(rep.samples):<3} "
                  f"{rep.max_residual:13.2e} {atoms:>7} {time.perf_counter() - t0:7.1f}")


if __name__ == "__main__":
    main()
