"""Time the numba solver kernels against the pure-numpy fallback.

Both backends implement the same two inner loops (sinkhorn_log and
partial_dykstra_log); this script runs them on identical seeded instances,
reports best-of-N wall time per backend, and cross-checks that the answers
agree. Compilation happens during warmup so the numba numbers exclude it.

Usage: python3 benchmarks/bench_solvers.py [--shapes 200x4,2000x16] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from labelot._kernels import numpy_backend

try:
    from labelot._kernels import numba_backend
except ImportError:
    numba_backend = None

LAM = 5.0
MAX_ITERS = 400
TOL = 1e-12
MASS_P = 0.7


def make_instance(n: int, m: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    cost = rng.random((n, m)) * 3.0
    a = rng.random(n) + 0.1
    a /= a.sum()
    b = rng.random(m) + 0.1
    b /= b.sum()
    logk = np.ascontiguousarray(-LAM * cost)
    flat_mx = float(logk.max())
    log_norm = np.log(np.sum(np.exp(logk - flat_mx))) + flat_mx
    return {
        "logk": logk,
        "a": a,
        "b": b,
        "log_a": np.log(a),
        "log_b": np.log(b),
        "logk0": np.ascontiguousarray(logk + np.log(MASS_P) - log_norm),
    }


def run_complete(backend, inst: dict):
    return backend.sinkhorn_log(
        inst["logk"], inst["a"], inst["b"], inst["log_a"], inst["log_b"], MAX_ITERS, TOL
    )


def run_partial(backend, inst: dict):
    return backend.partial_dykstra_log(
        inst["logk0"], inst["a"], inst["b"], inst["log_a"], inst["log_b"], MASS_P, MAX_ITERS, TOL
    )


def best_of(fn, backend, inst: dict, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(backend, inst)
        best = min(best, time.perf_counter() - start)
    return best


def agreement(fn, inst: dict) -> float:
    ours = fn(numba_backend, inst)
    ref = fn(numpy_backend, inst)
    worst = 0.0
    for got, want in zip(ours[:-2], ref[:-2]):
        worst = max(worst, float(np.max(np.abs(np.asarray(got) - np.asarray(want)))))
    return worst


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--shapes", default="200x4,2000x16,10000x32",
                        help="comma-separated NxM instance shapes")
    parser.add_argument("--repeats", type=int, default=5, help="take the best of N runs")
    args = parser.parse_args()
    shapes = [tuple(int(x) for x in s.split("x")) for s in args.shapes.split(",")]

    if numba_backend is None:
        print("numba is not importable; only the numpy fallback is available")

    kernels = [("sinkhorn_log", run_complete), ("partial_dykstra_log", run_partial)]
    header = f"{'kernel':<22} {'shape':>10} {'numpy':>12} {'numba':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n, m in shapes:
        inst = make_instance(n, m, seed=n + m)
        for name, fn in kernels:
            fn(numpy_backend, inst)
            np_time = best_of(fn, numpy_backend, inst, args.repeats)
            if numba_backend is None:
                print(f"{name:<22} {f'{n}x{m}':>10} {np_time * 1e3:>10.2f}ms {'-':>12} {'-':>9}")
                continue
            fn(numba_backend, inst)
            nb_time = best_of(fn, numba_backend, inst, args.repeats)
            print(
                f"{name:<22} {f'{n}x{m}':>10} {np_time * 1e3:>10.2f}ms "
                f"{nb_time * 1e3:>10.2f}ms {np_time / nb_time:>8.2f}x"
            )
    if numba_backend is not None:
        inst = make_instance(400, 8, seed=99)
        worst = max(agreement(fn, inst) for _, fn in kernels)
        print(f"\nbackend agreement on 400x8: max deviation {worst:.2e}")


if __name__ == "__main__":
    main()
