"""Time the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from zigzag_power import catalog, cumulative_probabilities, kernels

CASES = [
    # (label, rows, n) for statistics_matrix on the 10-cell null
    ("stats 10k x N=30", 10_000, 30),
    ("stats 10k x N=200", 10_000, 200),
    ("stats 100k x N=50", 100_000, 50),
]
COMPOSITIONS = [(12, 6), (20, 5), (25, 4)]


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = [kernels.python_backend]
    if kernels.compiled_backend is None:
        print("compiled kernels not built; timing the fallback only")
    else:
        backends.append(kernels.compiled_backend)

    null = catalog("zigzag-null").resolved
    p, h = null.array, cumulative_probabilities(null)
    rng = np.random.default_rng(0)

    print(f"{'case':<26}" + "".join(f"{b.NAME:>12}" for b in backends) + ("   speedup" if len(backends) == 2 else ""))
    rows = []
    for label, r, n in CASES:
        counts = rng.multinomial(n, p, size=r).astype(np.int64)
        times = [best_of(lambda b=b: b.statistics_matrix(counts, p, h, n), args.repeat) for b in backends]
        rows.append((label, times))
    for n, k in COMPOSITIONS:
        times = [best_of(lambda b=b: b.compositions(n, k), args.repeat) for b in backends]
        rows.append((f"compositions n={n} k={k}", times))

    for label, times in rows:
        line = f"{label:<26}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
