"""Benchmark the compiled matching kernels against the numpy/scipy fallback.

Usage: python benchmarks/bench_matching.py [max_n]

Times greedy one-to-one selection and the exact assignment on random cosine
distance matrices of growing size, checks that the lanes agree, and prints a
table of per-call times and speedups.
"""
import sys
import time

import numpy as np

from semshift.kernels import _fallback

try:
    from semshift.kernels import _native
except ImportError:
    print("compiled kernels not built; nothing to compare")
    sys.exit(1)


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 1200
    rng = np.random.default_rng(0)
    sizes = [n for n in (50, 100, 200, 400, 800, 1200, 1600, 2400) if n <= max_n]
    print(f"{'n':>6} {'kernel':<10} {'fallback':>12} {'native':>12} {'speedup':>9}")
    for n in sizes:
        a = rng.standard_normal((n, 64))
        b = rng.standard_normal((n, 64))
        ua = a / np.linalg.norm(a, axis=1, keepdims=True)
        ub = b / np.linalg.norm(b, axis=1, keepdims=True)
        dist = np.clip(1.0 - ua @ ub.T, 0.0, 2.0)

        t_fb, (rf, cf) = time_call(_fallback.greedy_match, dist)
        t_nat, (rn, cn) = time_call(_native.greedy_match, dist)
        assert np.array_equal(rf, rn) and np.array_equal(cf, cn)
        print(f"{n:>6} {'greedy':<10} {t_fb * 1e3:>10.2f}ms {t_nat * 1e3:>10.2f}ms "
              f"{t_fb / t_nat:>8.1f}x")

        t_fb, (rf, cf) = time_call(_fallback.hungarian, dist, repeats=3)
        t_nat, (rn, cn) = time_call(_native.hungarian, dist, repeats=3)
        cost_f = dist[rf, cf].sum()
        cost_n = dist[rn, cn].sum()
        assert abs(cost_f - cost_n) < 1e-9 * max(1.0, cost_f)
        print(f"{n:>6} {'hungarian':<10} {t_fb * 1e3:>10.2f}ms {t_nat * 1e3:>10.2f}ms "
              f"{t_fb / t_nat:>8.1f}x")


if __name__ == "__main__":
    main()
