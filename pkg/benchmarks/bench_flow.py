#!/usr/bin/env python3
"""Compare the compiled flow kernel against the numpy fallback.

Usage: python benchmarks/bench_flow.py [--size 256] [--iters 100] [--repeats 5]
"""

import argparse
import time

import numpy as np

from fumble.kernels import COMPILED, hs_iterate, hs_iterate_numpy


def time_fn(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--size", type=int, default=256)
    parser.add_argument("--iters", type=int, default=100)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    ix, iy, it = rng.normal(size=(3, args.size, args.size))
    u = np.zeros((args.size, args.size))
    v = np.zeros_like(u)
    call = (ix, iy, it, u, v, 1.0, args.iters)

    if not COMPILED:
        print("compiled kernel unavailable; only the numpy fallback is importable")
    t_numpy = time_fn(hs_iterate_numpy, call, args.repeats)
    print(f"numpy fallback : {t_numpy * 1000:8.1f} ms  ({args.size}x{args.size}, {args.iters} iters)")
    if COMPILED:
        t_compiled = time_fn(hs_iterate, call, args.repeats)
        print(f"compiled kernel: {t_compiled * 1000:8.1f} ms")
        print(f"speedup        : {t_numpy / t_compiled:8.1f}x")
        a = hs_iterate(*call)
        b = hs_iterate_numpy(*call)
        print(f"max |diff|     : {max(np.abs(a[0] - b[0]).max(), np.abs(a[1] - b[1]).max()):.2e}")


if __name__ == "__main__":
    main()
