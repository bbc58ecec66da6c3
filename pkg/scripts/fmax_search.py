"""Compare the closed-form dual maximum with certified random search."""

import argparse

import numpy as np

from sepcone.lorentz import random_orthogonal
from sepcone.oracle import random_search_fmax
from sepcone.radii import f_max


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=20)
    ap.add_argument("--budget", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print(f"{'m':>2} {'n':>2} {'f_max':>12} {'branch':>17} {'search':>12} {'sampled':>12}")
    for _ in range(args.pairs):
        m, n = (int(k) for k in rng.integers(2, 6, size=2))
        P1 = (lambda Q: (Q * rng.uniform(0.2, 3, m - 1)) @ Q.T)(random_orthogonal(rng, m - 1))
        P2 = (lambda Q: (Q * rng.uniform(0.2, 3, n - 1)) @ Q.T)(random_orthogonal(rng, n - 1))
        value, branch = f_max(P1, P2)
        trace = []
        best = random_search_fmax(P1, P2, budget=args.budget, seed=int(rng.integers(1 << 30)), trace=trace)
        sampled = max((row[2] for row in trace if row[1] != "rank1_optimizer" and row[1] != "ds_optimizer"),
                      default=float("nan"))
        print(f"{m:>2} {n:>2} {value:12.6f} {str(branch):>17} {best:12.6f} {sampled:12.6f}")


if __name__ == "__main__":
    main()
