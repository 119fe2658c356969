"""Wall-clock comparison of the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--n 100000] [--u 64] [--repeat 5]

Both backends receive the same seeded input and must return identical counts;
the script refuses to time them otherwise.
"""
import argparse
import sys
import timeit

import numpy as np

from fringesort import _pykernels
from fringesort.core import uniform
from fringesort.inputgen import SplitMix64, cumulative, sample_iid_array

try:
    from fringesort import _ckernels
except ImportError:
    _ckernels = None


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--u", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; only the python backend is available", file=sys.stderr)
        return 1

    q = uniform(args.u)
    vals = sample_iid_array(q, args.n, args.seed)
    uniforms = SplitMix64(args.seed + 1).random_block(args.n)
    cdf = cumulative(q)
    cases = [
        ("quicksort_counts k=1", lambda m: m.quicksort_counts(vals, 1)),
        ("quicksort_counts k=5", lambda m: m.quicksort_counts(vals, 5)),
        ("fringe_counts k=1", lambda m: m.fringe_counts(vals, 1)),
        ("fringe_counts k=5", lambda m: m.fringe_counts(vals, 5)),
        ("inverse_cdf", lambda m: m.inverse_cdf(cdf, uniforms)),
    ]
    print(f"n={args.n} u={args.u} best of {args.repeat}")
    print(f"{'kernel':24s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>9s}")
    for name, call in cases:
        a, b = call(_pykernels), call(_ckernels)
        same = np.array_equal(a, b) if isinstance(a, np.ndarray) else tuple(a) == tuple(b)
        if not same:
            print(f"{name}: backends disagree ({a} vs {b})", file=sys.stderr)
            return 1
        tp = _best(lambda: call(_pykernels), args.repeat)
        tc = _best(lambda: call(_ckernels), args.repeat)
        print(f"{name:24s} {tp:12.4f} {tc:12.4f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
