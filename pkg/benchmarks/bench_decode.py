"""Benchmark the compiled decode kernels against the pure-numpy fallback.

Usage: python3 benchmarks/bench_decode.py [--sizes 1000,100000] [--repeats 5]
"""
import argparse
import time

import numpy as np

from sdof_lab import _backend, _kernels_py


def bench(fn, values, sent, noise, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(values, sent, noise)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="10000,100000,1000000",
                    help="comma-separated trial counts")
    ap.add_argument("--points", type=int, default=4097,
                    help="constellation size")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    values = np.sort(rng.standard_normal(args.points)) * args.points / 8
    print(f"active backend: {_backend.BACKEND}")
    print(f"constellation: {args.points} points, best of {args.repeats} runs")
    print(f"{'trials':>10} {'compiled (s)':>14} {'fallback (s)':>14} {'speedup':>9}")
    for size in (int(s) for s in args.sizes.split(",")):
        sent = rng.integers(0, args.points, size=size).astype(np.int64)
        noise = rng.standard_normal(size)
        ec = _backend.count_decode_errors(values, sent, noise)
        ep = _kernels_py.count_decode_errors(values, sent, noise)
        assert ec == ep, "backends disagree"
        tc = bench(_backend.count_decode_errors, values, sent, noise, args.repeats)
        tp = bench(_kernels_py.count_decode_errors, values, sent, noise, args.repeats)
        print(f"{size:>10} {tc:>14.6f} {tp:>14.6f} {tp / tc:>8.2f}x")


if __name__ == "__main__":
    main()
