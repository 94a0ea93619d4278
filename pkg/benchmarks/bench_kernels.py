#!/usr/bin/env python3
"""Throughput of the numba kernels against the pure-numpy fallback.

Both modules are imported directly, so one process times both backends
regardless of HYPERMINHASH_DISABLE_NUMBA.

    python3 benchmarks/bench_kernels.py [--items N] [--repeat K]
"""

import argparse
import time

import numpy as np

from hyperminhash import _kernels_numpy as knp
from hyperminhash._accel import HAVE_NUMBA
from hyperminhash.hashing import lane_seeds


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(mod, keys, p, q, r, repeat):
    sa, sb = lane_seeds(0)
    regs = np.zeros(1 << p, dtype=np.uint64)
    words = mod.words_u64(keys[:1024], sa, sb)  # warm-up / JIT compile
    mod.hmh_update(regs, *words, p, q, r)

    words = mod.words_u64(keys, sa, sb)
    t_hash = best_of(lambda: mod.words_u64(keys, sa, sb), repeat)
    t_update = best_of(lambda: mod.hmh_update(regs, *words, p, q, r), repeat)
    return t_hash, t_update


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--items", type=int, default=1 << 22)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("-p", type=int, default=12)
    args = ap.parse_args()

    keys = np.arange(args.items, dtype=np.uint64)
    backends = [("numpy", knp)]
    if HAVE_NUMBA:
        from hyperminhash import _kernels_numba as knb

        backends.append(("numba", knb))
    else:
        print("numba disabled; timing the numpy fallback only")

    print(f"items={args.items} p={args.p} q=6 r=10, best of {args.repeat}")
    print(f"{'backend':<8} {'hash Mitem/s':>13} {'update Mitem/s':>15} {'total s':>9}")
    for name, mod in backends:
        th, tu = bench(mod, keys, args.p, 6, 10, args.repeat)
        mi = args.items / 1e6
        print(f"{name:<8} {mi / th:13.1f} {mi / tu:15.1f} {th + tu:9.3f}")


if __name__ == "__main__":
    main()
