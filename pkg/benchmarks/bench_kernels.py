"""Benchmark the numba kernels against their pure-numpy twins.

Runs each hot kernel on representative panel shapes with both backends,
verifies the outputs agree bitwise, and prints wall times plus the speedup.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from blockgs import kernels


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_matmul(m, k, n, repeat, rng):
    a = np.asfortranarray(rng.standard_normal((m, k)))
    b = np.asfortranarray(rng.standard_normal((k, n)))
    out_nb = np.empty((m, n), order="F")
    out_np = np.empty((m, n), order="F")
    kernels._matmul_fill_numba(a, b, out_nb)  # warm the JIT
    t_nb = _time(lambda: kernels._matmul_fill_numba(a, b, out_nb), repeat)
    t_np = _time(lambda: kernels._matmul_fill_numpy(a, b, out_np), repeat)
    assert out_nb.tobytes() == out_np.tobytes(), "backends disagree"
    return f"matmul {m}x{k} @ {k}x{n}", t_nb, t_np


def bench_householder(m, p, repeat, rng):
    b = np.asfortranarray(rng.standard_normal((m, p)))

    def factor(fill):
        rwork = np.array(b, order="F", copy=True)
        q = np.asfortranarray(np.eye(m, p))
        v = np.zeros((m, p), order="F")
        beta = np.zeros(p)
        fill(rwork, q, v, beta)
        return q, rwork

    q_nb, r_nb = factor(kernels._householder_fill_numba)
    t_nb = _time(lambda: factor(kernels._householder_fill_numba), repeat)
    t_np = _time(lambda: factor(kernels._householder_fill_numpy), repeat)
    q_np, r_np = factor(kernels._householder_fill_numpy)
    assert q_nb.tobytes() == q_np.tobytes(), "backends disagree"
    assert r_nb.tobytes() == r_np.tobytes(), "backends disagree"
    return f"householder {m}x{p}", t_nb, t_np


def bench_norm(m, repeat, rng):
    x = rng.standard_normal(m)
    nb = kernels._sumsq_numba(x)
    assert nb == kernels._sumsq_py(x), "backends disagree"
    t_nb = _time(lambda: kernels._sumsq_numba(x), repeat)
    t_np = _time(lambda: kernels._sumsq_py(x), repeat)
    return f"column sumsq m={m}", t_nb, t_np


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if not kernels.both_backends_available():
        raise SystemExit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    rows = [
        bench_matmul(500, 240, 16, args.repeat, rng),
        bench_matmul(240, 500, 240, args.repeat, rng),
        bench_matmul(2000, 64, 64, args.repeat, rng),
        bench_householder(500, 16, args.repeat, rng),
        bench_householder(2000, 32, args.repeat, rng),
        bench_norm(100_000, args.repeat, rng),
    ]
    print(f"{'kernel':<28} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for name, t_nb, t_np in rows:
        print(f"{name:<28} {t_nb * 1e3:>10.2f}ms {t_np * 1e3:>10.2f}ms {t_np / t_nb:>8.1f}x")
    print("all kernels agree bitwise across backends")


if __name__ == "__main__":
    main()
