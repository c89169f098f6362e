"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel runs once per backend to warm up (numba compiles on first call),
then the best of ``--repeat`` timed runs is reported.
"""
import argparse
import time

import numpy as np

from fplab import kernels
from fplab._backend import backend, numba_available
from fplab.charsum import SparsePoly, eval_sparse_sum
from fplab.field import is_prime, make_field, subgroup
from fplab.incidence import collinear_triples, line_histogram


def _subgroup_case():
    p = next(q for q in range(1_000_001, 1_100_000, 500) if is_prime(q))
    ctx = make_field(p)
    return ctx, subgroup(ctx, 500)


def cases():
    ctx, G = _subgroup_case()
    small = make_field(10007)
    rng = np.random.default_rng(0)
    A = rng.choice(np.arange(1, 10007), 100, replace=False)
    B = rng.choice(np.arange(1, 10007), 100, replace=False)
    big = make_field(1_000_003)
    poly = SparsePoly(((3, 17), (5, 1001), (1, 40_000)))
    U = rng.choice(np.arange(1, 10007), 600, replace=False)
    return {
        f"collinear_triples |G|=500 p={ctx.p}": lambda: collinear_triples(ctx, G, G, 1, 3),
        "line_histogram |A|=|B|=100 p=10007": lambda: line_histogram(small, A, B),
        "eval_sparse_sum trinomial p=1000003": lambda: eval_sparse_sum(big, poly, 5),
        "difference_histogram |U|=600 p=10007": lambda: kernels.difference_histogram(U, 10007),
    }


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    names = ["numba", "numpy"] if numba_available() else ["numpy"]
    print(f"{'kernel':<42}" + "".join(f"{n:>10}" for n in names) + ("   speedup" if len(names) == 2 else ""))
    for label, fn in cases().items():
        row = []
        for name in names:
            with backend(name):
                row.append(best_of(fn, args.repeat))
        line = f"{label:<42}" + "".join(f"{t:>9.3f}s" for t in row)
        if len(row) == 2:
            line += f"{row[1] / row[0]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
