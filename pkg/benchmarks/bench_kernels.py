"""Compiled versus pure-Python symmetrizer kernel.

    python3 benchmarks/bench_kernels.py [--degree 6] [--repeat 3]

Both kernels fill the same count table for every multidegree block of a
rank-2 diagram; the script checks that the tables agree and prints the
best wall time of each.
"""
import argparse
import itertools
import time
from fractions import Fraction

from nichols_lattice import kernels
from nichols_lattice._kernels_py import symmetrizer_counts as pure
from nichols_lattice.braiding import BraidingDiagram
from nichols_lattice.oracle import multidegrees, symmetric_gauge, words_of


def blocks(q, n):
    g = symmetric_gauge(q)
    perms = list(itertools.permutations(range(n)))
    for d in multidegrees(q.rank, n):
        words = words_of(d)
        lookup = [0] * (q.rank ** n)
        for k, w in enumerate(words):
            code = 0
            for x in w:
                code = code * q.rank + x
            lookup[code] = k
        yield words, perms, g.E, n, q.rank, g.N, lookup


def timed(impl, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = [kernels.symmetrizer_counts(*a, impl=impl) for a in args]
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--degree", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=3)
    opts = ap.parse_args()
    q = BraidingDiagram.from_exponents([Fraction(2, 5), Fraction(4, 5)], {(0, 1): Fraction(-4, 5)})
    args = list(blocks(q, opts.degree))
    t_py, ref = timed(pure, args, opts.repeat)
    print(f"pure python : {t_py:.4f} s")
    if not kernels.COMPILED:
        print("compiled    : not built (pip install -e . --no-build-isolation builds it)")
        return
    t_c, out = timed(None, args, opts.repeat)
    assert [list(x) for x in out] == [list(x) for x in ref], "kernels disagree"
    print(f"compiled    : {t_c:.4f} s")
    print(f"speed-up    : {t_py / t_c:.1f}x (degree {opts.degree}, {len(args)} blocks)")


if __name__ == "__main__":
    main()
