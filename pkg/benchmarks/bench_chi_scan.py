#!/usr/bin/env python3
"""Benchmark the angle-scan kernel: numba @njit vs the pure-numpy fallback.

The scan evaluates |<psi(theta,phi)| l2 |psi(theta,phi)>| over the full
midpoint grid, which is the inner loop of every sweep cell. Run:

    python benchmarks/bench_chi_scan.py [--n-theta 180] [--n-phi 360] [--repeats 3]

Chain sizes 3..6 cover the realistic range; the dense eigensolve that feeds
the scan dominates total sweep time from n_spins = 5 upward, so treat these
numbers as the budget of the scan stage only.
"""

import argparse
import time

import numpy as np

from qmpemba import _kernels
from qmpemba.mpemba import midpoint_grid


def random_left_mode(rng: np.random.Generator, dim: int) -> np.ndarray:
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    h = 0.5 * (x + x.conj().T)
    return h - np.trace(h) / dim * np.eye(dim)


def time_kernel(fn, l2, thetas, phis, n_spins, repeats):
    fn(l2, thetas, phis, n_spins)  # warmup (JIT compile / cache touch)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(l2, thetas, phis, n_spins)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-theta", type=int, default=180)
    parser.add_argument("--n-phi", type=int, default=360)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    thetas, phis = midpoint_grid(args.n_theta, args.n_phi)
    rng = np.random.default_rng(0)

    try:
        numba_kernel = _kernels._build_numba_kernel()
    except ImportError:
        numba_kernel = None
        print("numba not importable; benchmarking the numpy path only")

    print(f"grid {args.n_theta} x {args.n_phi}, best of {args.repeats}")
    header = f"{'n_spins':>8} {'dim':>5} {'numpy [s]':>10}"
    if numba_kernel is not None:
        header += f" {'numba [s]':>10} {'speedup':>8}"
    print(header)
    for n_spins in (3, 4, 5, 6):
        dim = 2**n_spins
        l2 = np.ascontiguousarray(random_left_mode(rng, dim))
        t_numpy = time_kernel(_kernels.chi_grid_numpy, l2, thetas, phis, n_spins, args.repeats)
        line = f"{n_spins:>8} {dim:>5} {t_numpy:>10.3f}"
        if numba_kernel is not None:
            t_numba = time_kernel(numba_kernel, l2, thetas, phis, n_spins, args.repeats)
            line += f" {t_numba:>10.3f} {t_numpy / t_numba:>8.2f}"
        print(line)


if __name__ == "__main__":
    main()
