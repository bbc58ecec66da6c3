"""Multi-qubit separable-ball bound: closed form, recursion and the
three-qubit reference value."""

import argparse

from sepcone.radii import GURVITS_3Q, multiqubit_bound, multiqubit_bound_recursive


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=12)
    args = ap.parse_args()
    print(f"{'k':>3} {'rho_k':>18} {'recursion':>18} {'rel diff':>9}")
    for k in range(1, args.k_max + 1):
        a, b = multiqubit_bound(k), multiqubit_bound_recursive(k)
        print(f"{k:>3} {a:18.15f} {b:18.15f} {abs(a - b) / a:9.1e}")
    print(f"\nrho_3 - sqrt(8/11) = {multiqubit_bound(3) - GURVITS_3Q:.6f}")


if __name__ == "__main__":
    main()
