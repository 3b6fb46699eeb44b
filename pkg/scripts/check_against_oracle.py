"""Compare every closed-form detection map with the stepwise oracle on random inputs.

    python scripts/check_against_oracle.py --cases 2000 --seed 0
"""

import argparse
import time

import numpy as np

from bellcm import detection, gaussian, oracle
from bellcm.matcore import Quadrature


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cases", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    worst = {"homodyne": 0.0, "bell_like": 0.0, "heterodyne": 0.0}
    t_closed = t_oracle = 0.0
    for k in range(args.cases):
        n = rng.integers(1, 5)
        V = gaussian.random_cm(n + 2, int(rng.integers(2**32)))
        T = rng.uniform()
        eta, eta_prime = rng.uniform(0.1, 1.0, size=2)
        quad = Quadrature.Q if k % 2 else Quadrature.P

        t0 = time.perf_counter()
        closed = {
            "homodyne": detection.homodyne(V, quad, eta),
            "bell_like": detection.bell_like(V, T, eta, eta_prime),
            "heterodyne": detection.heterodyne(V, eta, eta_prime),
        }
        t1 = time.perf_counter()
        ref = {
            "homodyne": oracle.homodyne_stepwise(V, quad, eta)[0],
            "bell_like": oracle.bell_like_stepwise(V, T, eta, eta_prime)[0],
            "heterodyne": oracle.heterodyne_stepwise(V, eta, eta_prime)[0],
        }
        t2 = time.perf_counter()
        t_closed += t1 - t0
        t_oracle += t2 - t1
        for name in worst:
            a, b = closed[name].matrix, ref[name].matrix
            worst[name] = max(worst[name], float(np.max(np.abs(a - b) / np.abs(b))))

    for name, dev in worst.items():
        print(f"{name:>10}: max entrywise relative deviation {dev:.2e}")
    print(f"closed forms {t_closed:.3f}s, oracle {t_oracle:.3f}s over {args.cases} cases")


if __name__ == "__main__":
    main()
