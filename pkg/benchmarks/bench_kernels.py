"""Compare the numba and numpy kernel backends.

Kernel mode times each kernel on identical random inputs with both
backends and checks that the outputs agree. End-to-end mode runs a small
solver workload in a subprocess per backend, selected with TSRMB_BACKEND.

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --sizes 8,32,96 --repeats 5 --end-to-end
"""

import argparse
import os
import statistics
import subprocess
import sys
import time
from itertools import combinations

import numpy as np

from tsrmb.kernels import numba_backend, numpy_backend

WORKLOAD = """
import time
from tsrmb import BACKEND
from tsrmb.evaluate import evaluate
from tsrmb.instances import gen_random_euclidean
from tsrmb.solvers import solve_k1, solve_small_surplus, solve_two_scenarios
start = time.perf_counter()
for seed in range({n}):
    a = gen_random_euclidean(4, 12, 14, "explicit:2x5", 1.0, seed)
    evaluate(a, solve_two_scenarios(a))
    b = gen_random_euclidean(2, 18, 7, "implicit:3", 1.0, seed)
    evaluate(b, solve_small_surplus(b))
    c = gen_random_euclidean(3, 10, 8, "implicit:1", 1.0, seed)
    evaluate(c, solve_k1(c))
print(BACKEND, time.perf_counter() - start)
"""


def make_inputs(n, rng):
    cost = rng.uniform(0, 100, size=(n, n))
    cost[rng.random((n, n)) < 0.2] = np.inf
    adj = rng.random((n, n)) < 0.15
    pts = rng.uniform(0, 1, size=(n, 2))
    d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(axis=2))
    d[rng.random((n, n)) < 0.5] = np.inf
    d = np.minimum(d, d.T)
    np.fill_diagonal(d, 0.0)
    k = min(3, n)
    riders = min(n, 18)
    combos = np.array(list(combinations(range(riders), k)), dtype=np.int64)
    hall_d = rng.uniform(0, 1, size=(riders, n))
    return {
        "hungarian": (cost,),
        "hopcroft_karp": (adj,),
        "floyd_warshall": (d,),
        "hall_values": (hall_d, combos),
    }


def time_call(fn, args, repeats):
    out = fn(*args)
    times = []
    for _ in range(repeats):
        t = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t)
    return statistics.median(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def kernel_table(sizes, repeats, seed):
    rng = np.random.default_rng(seed)
    print(f"{'kernel':<16}{'n':>6}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}  agree")
    for n in sizes:
        for name, args in make_inputs(n, rng).items():
            t_np, out_np = time_call(getattr(numpy_backend, name), args, repeats)
            if numba_backend is None:
                print(f"{name:<16}{n:>6}{t_np * 1e3:>12.3f}{'-':>12}{'-':>10}  -")
                continue
            t_nb, out_nb = time_call(getattr(numba_backend, name), args, repeats)
            speed = t_np / t_nb if t_nb > 0 else float("inf")
            print(f"{name:<16}{n:>6}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{speed:>10.1f}  "
                  f"{same(out_np, out_nb)}")


def end_to_end(n):
    print("\nend to end (two-scenario, small-surplus and k=1 solves with exact evaluation)")
    for backend in ("numpy", "numba"):
        env = dict(os.environ, TSRMB_BACKEND=backend)
        # one warm run so numba compile time (cached on disk) is not counted
        subprocess.run([sys.executable, "-c", WORKLOAD.format(n=1)], env=env, check=True,
                       capture_output=True)
        res = subprocess.run([sys.executable, "-c", WORKLOAD.format(n=n)], env=env, check=True,
                             capture_output=True, text=True)
        name, secs = res.stdout.split()
        print(f"  {name:<6} {float(secs):8.3f} s for {n} seeds")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="8,24,64,128")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--end-to-end", action="store_true")
    ap.add_argument("--instances", type=int, default=20, help="seeds for --end-to-end")
    args = ap.parse_args()
    kernel_table([int(x) for x in args.sizes.split(",")], args.repeats, args.seed)
    if args.end_to_end:
        end_to_end(args.instances)


if __name__ == "__main__":
    main()
