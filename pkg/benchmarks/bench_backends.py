"""Compare the compiled and pure-Python kernels on solver and oracle workloads.

    python benchmarks/bench_backends.py [--repeat 3]

Each row also confirms both backends returned identical results.
"""

import argparse
import time

import numpy as np

from acogrn import _backend
from acogrn.aco import AcoParams, run_aco
from acogrn.correlation import CorrelationMatrix
from acogrn.datasets import sos_correlation
from acogrn.oracle import brute_force_optimum


def random_corr(n, seed):
    rng = np.random.default_rng(seed)
    a = np.triu(rng.uniform(-1, 1, (n, n)), 1)
    a = a + a.T
    np.fill_diagonal(a, 1.0)
    return CorrelationMatrix([f"g{i}" for i in range(n)], a)


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = _backend.available()

    cases = [
        ("aco  sos   N=8 ", lambda b: run_aco(sos_correlation(), AcoParams(), backend=b)),
        ("aco  rand  N=30", lambda b: run_aco(random_corr(30, 1), AcoParams(n_iterations=50), backend=b)),
        ("aco  rand  N=80", lambda b: run_aco(random_corr(80, 2), AcoParams(n_iterations=20), backend=b)),
        ("oracle     N=8 ", lambda b: brute_force_optimum(random_corr(8, 3), backend=b)),
        ("oracle     N=9 ", lambda b: brute_force_optimum(random_corr(9, 4), backend=b)),
    ]
    if "cython" in backends:
        cases.append(("oracle     N=11", None))

    print(f"{'workload':<18}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}  same")
    for label, fn in cases:
        times, outs = {}, {}
        for b in backends:
            if fn is None:
                if b != "cython":
                    continue
                times[b], outs[b] = timed(
                    lambda: brute_force_optimum(random_corr(11, 5), backend="cython"), 1)
            else:
                times[b], outs[b] = timed(lambda: fn(b), args.repeat)
        cells = "".join(f"{times[b]:>11.4f}s" if b in times else f"{'-':>12}" for b in backends)
        speedup = (f"{times['python'] / times['cython']:>9.1f}x"
                   if {"python", "cython"} <= times.keys() else f"{'-':>10}")
        same = len({repr(o) for o in outs.values()}) == 1
        print(f"{label:<18}{cells}{speedup}  {'yes' if same else 'NO'}")


if __name__ == "__main__":
    main()
