"""Time the compiled kernels against the pure-Python fallback.

Usage::

    python3 benchmarks/bench_kernels.py [--n 20001] [--repeat 5]

Both backends run on the same trees; outputs are checked for equality
before timings are reported.
"""
import argparse
import timeit

import numpy as np

from gwtoll import kernels
from gwtoll.sampler import make_offspring, make_rng, sample_conditioned


def _cases(t):
    return {
        "tree_arrays": lambda k: k.tree_arrays(t.outdeg),
        "ind_rho": lambda k: k.ind_rho(t.parent),
        "match_rho": lambda k: k.match_rho(t.parent),
        "dom_rho": lambda k: k.dom_rho(t.parent),
        "ind_envelope M=8": lambda k: k.ind_envelope(t.parent, t.depth, 8),
        "dom_envelope M=8": lambda k: k.dom_envelope(t.parent, t.depth, t.outdeg, 8),
        "deletion_rounds path r=3": lambda k: k.deletion_rounds(t.parent, t.outdeg, kernels.PATH, 3),
        "deletion_rounds oldpath r=3": lambda k: k.deletion_rounds(t.parent, t.outdeg, kernels.OLDPATH, 3),
    }


def _equal(a, b):
    if isinstance(a, tuple):
        return all(_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b, equal_nan=True)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20_001)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--dist", default="geometric")
    args = ap.parse_args()
    if kernels.compiled is None:
        raise SystemExit("compiled extension not available; build it with pip install -e .")
    t = sample_conditioned(make_offspring(args.dist), args.n, rng=make_rng(0))
    print(f"tree: {args.dist}, n={t.n}, height={t.height}")
    print(f"{'kernel':30s} {'compiled':>12s} {'python':>12s} {'speed-up':>9s}")
    for name, fn in _cases(t).items():
        if not _equal(fn(kernels.compiled), fn(kernels.pure)):
            raise SystemExit(f"{name}: backends disagree")
        tc = min(timeit.repeat(lambda: fn(kernels.compiled), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(kernels.pure), number=1, repeat=args.repeat))
        print(f"{name:30s} {tc * 1e3:10.3f}ms {tp * 1e3:10.3f}ms {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
