"""Reconstruction from randomly erased coefficients.

Each coefficient of a harmonic tight frame is kept with probability 1/2 and
the survivors are rescaled by 2/m. The mean relative error decays like
sqrt(n/m); dividing by sqrt((n/m) ln n) gives a ratio M_hat that stays in a
narrow band as n grows.

    python3 demos/erasure_monte_carlo.py [trials]
"""

import sys

import numpy as np

from kreinweave import ErasureConfig, monte_carlo_bound, uniform_tight_frame
from kreinweave.erasure import estimator_moments, exact_erasure_mean


def main(trials=4000):
    print("exact enumeration, n = 1, m = 2:", exact_erasure_mean(uniform_tight_frame(1, 2), uniform_tight_frame(1, 2), [], [[1.0]]))
    print(f"\n{'n':>3} {'m':>5} {'mean error':>11} {'sqrt(n/m)':>10} {'M_hat':>7}")
    for n in (4, 8, 16):
        for m in (16 * n, 64 * n):
            r = monte_carlo_bound(ErasureConfig(n=n, m=m, trials=trials, seed=1))
            print(f"{n:3d} {m:5d} {r.mean_relative_error:11.4f} {np.sqrt(n / m):10.4f} {r.m_hat:7.3f}")
    cfg = ErasureConfig(n=2, m=8, trials=20 * trials, seed=2)
    k = np.array([1.0, -0.5])
    mean, se = estimator_moments(cfg, k)
    print(f"\nE[k_hat] for k = {k}: {np.round(mean, 4)} +/- {np.round(se, 4)}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 4000)
