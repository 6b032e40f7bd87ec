"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--n 14] [--perm-n 8] [--repeat 3]
"""
import argparse
import time
from fractions import Fraction

import numpy as np

from subsearch import kernels
from subsearch.generators import coverage, dual_coverage
from subsearch.kernels import Table, available_backends


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def cases(n, perm_n, mode):
    F = Table.build(coverage(n, 1).table(), mode)
    G = Table.build(dual_coverage(n, 2).table(), mode)
    Fp = Table.build(coverage(perm_n, 3).table(), mode)
    Gp = Table.build(dual_coverage(perm_n, 4).table(), mode)
    full = (1 << n) - 1
    M = np.random.default_rng(0).integers(1, 20, size=(720, 6)).astype(float)
    return {
        f"structure_scan n={n}": lambda b: kernels.structure_scan(F, n, backend=b),
        f"shifted_argmax n={n}": lambda b: kernels.shifted_argmax(G, F, Fraction(1, 3), full, backend=b),
        f"min_connectivity n={n}": lambda b: kernels.min_connectivity(F, G, n, backend=b),
        f"optimal_order n={n}": lambda b: kernels.optimal_order(G, F, n, backend=b),
        f"permutation_costs n={perm_n}": lambda b: kernels.permutation_costs(Gp, Fp, perm_n, backend=b),
        "fictitious_play 720x6, 20k rounds": lambda b: kernels.fictitious_play(M, 20_000, 0.0, backend=b),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=14)
    ap.add_argument("--perm-n", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--mode", choices=("rational", "float"), default="rational")
    args = ap.parse_args()
    backends = available_backends()
    if "cython" not in backends:
        print("compiled kernels are not built; only the Python backend is available")
    print(f"{'kernel':<36}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in cases(args.n, args.perm_n, args.mode).items():
        times = [best_time(lambda: fn(b), args.repeat) for b in backends]
        row = f"{name:<36}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"{times[1] / times[0]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
