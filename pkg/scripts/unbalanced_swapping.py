"""Entanglement swapping between two EPR pairs with an unbalanced Bell-like detector.

Prints the reduced variance and the q/p correlations of the swapped pair as
the beam-splitter transmissivity T and detector efficiency vary.

    python scripts/unbalanced_swapping.py --mu 3 --etas 1 0.9 0.7
"""

import argparse

import numpy as np

from bellcm import bell_like, epr_cm, permute_modes, validate


def swapped_state(mu, T, eta):
    # pairs (a, b) and (c, d); measure b and c
    V = permute_modes(epr_cm(mu) + epr_cm(mu), [0, 3, 1, 2])
    return bell_like(V, T, eta, eta)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--mu", type=float, default=3.0)
    parser.add_argument("--etas", type=float, nargs="+", default=[1.0, 0.9, 0.7])
    parser.add_argument("--steps", type=int, default=11)
    args = parser.parse_args()

    print(f"{'eta':>5} {'T':>5} {'var_a':>9} {'var_d':>9} {'cov_qq':>9} {'cov_pp':>9} {'min_eig':>9}")
    for eta in args.etas:
        for T in np.linspace(0.0, 1.0, args.steps):
            out = swapped_state(args.mu, T, eta).matrix
            lam = validate(out).min_eigenvalue
            print(f"{eta:5.2f} {T:5.2f} {out[0, 0]:9.4f} {out[2, 2]:9.4f} {out[0, 2]:9.4f} {out[1, 3]:9.4f} {lam:9.2e}")


if __name__ == "__main__":
    main()
