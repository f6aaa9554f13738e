"""Timing comparison of the numba kernels against the numpy fallback.

Run directly: python benchmarks/bench_backends.py
"""

import math
import time

import numpy as np

from mllt import _kernels_np

try:
    from mllt import _kernels_nb
except ImportError:
    _kernels_nb = None


def make_inputs(d, n_pts, N, seed=0):
    rng = np.random.default_rng(seed)
    raw = rng.uniform(0.05, 1.0, size=d + 1)
    p = raw[:d] / raw.sum()
    q = 1.0 - p.sum()
    ks = rng.multinomial(N, np.concatenate([p, [q]]), size=n_pts)[:, :d].astype(np.float64)
    deltas = (ks - N * p) / math.sqrt(N)
    return p, q, ks, deltas


def bench(fn, *args, repeats=5):
    fn(*args)  # warmup (and jit compile for numba)
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    d, n_pts, N = 3, 200_000, 1000
    p, q, ks, deltas = make_inputs(d, n_pts, N)
    logp, logq = np.log(p), math.log(q)
    pk = np.random.default_rng(1).uniform(0, 1e-3, size=5000)
    dens = np.random.default_rng(2).uniform(0, 1.0, size=(5000, 64))
    w = np.full(64, 1.0 / 64)

    cases = [
        ("log_pmf_batch", (ks, float(N), logp, logq)),
        ("sym_coeffs", (deltas, p, q)),
        ("raw_coeffs", (deltas, p, q)),
        ("abs_diff_cell_integrals", (pk, dens, w)),
    ]
    print(f"{'kernel':<26}{'numpy (s)':>12}{'numba (s)':>12}{'speedup':>10}")
    for name, args in cases:
        t_np = bench(getattr(_kernels_np, name), *args)
        if _kernels_nb is None:
            print(f"{name:<26}{t_np:>12.4f}{'n/a':>12}{'n/a':>10}")
            continue
        t_nb = bench(getattr(_kernels_nb, name), *args)
        print(f"{name:<26}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.2f}")


if __name__ == "__main__":
    main()
