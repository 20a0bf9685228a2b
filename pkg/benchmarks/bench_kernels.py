#!/usr/bin/env python3
"""Benchmark the compiled supersingularity kernels against the pure fallback.

Usage: python benchmarks/bench_kernels.py [--quick]

Covers the three hot paths: the Hasse coefficient sweep over F_q and F_q^2
(the per-prime verification cost, linear in q) and the full supersingular
census of F_q^2 (quadratic in q times the sweep).
"""

import argparse
import time

from heegner.kernels import HAVE_COMPILED, implementations


def _nonresidue(q):
    return next(m for m in range(2, q) if pow(m, (q - 1) // 2, q) == q - 1)


def time_call(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller sizes")
    args = parser.parse_args()

    impls = implementations()
    if not HAVE_COMPILED:
        print("compiled kernels unavailable; timing the pure fallback only")

    hasse_qs = [2309, 100003, 1000003] + ([] if args.quick else [9999991])
    census_qs = [61, 97] + ([] if args.quick else [151, 199])

    print(f"{'kernel':<22}{'q':>10}  " + "".join(f"{name:>12}" for name in impls))
    for q in hasse_qs:
        row = {}
        for name, mod in impls.items():
            dt, result = time_call(mod.hasse_nonzero_fq, q, 3, 2)
            row[name] = (dt, result)
        results = {r for _, r in row.values()}
        assert len(results) == 1, f"implementations disagree at q={q}"
        print(f"{'hasse F_q':<22}{q:>10}  "
              + "".join(f"{row[name][0]*1e3:>10.2f}ms" for name in impls))

    for q in hasse_qs:
        m2 = _nonresidue(q)
        row = {}
        for name, mod in impls.items():
            dt, result = time_call(mod.hasse_nonzero_fq2, q, m2, 3, 1, 2, 1)
            row[name] = (dt, result)
        assert len({r for _, r in row.values()}) == 1
        print(f"{'hasse F_q^2':<22}{q:>10}  "
              + "".join(f"{row[name][0]*1e3:>10.2f}ms" for name in impls))

    for q in census_qs:
        row = {}
        for name, mod in impls.items():
            dt, result = time_call(mod.supersingular_census_fq2, q, repeat=1)
            row[name] = (dt, result)
        assert len({r for _, r in row.values()}) == 1
        print(f"{'census F_q^2':<22}{q:>10}  "
              + "".join(f"{row[name][0]*1e3:>10.2f}ms" for name in impls))

    if HAVE_COMPILED:
        q = hasse_qs[-1]
        pure, _ = time_call(impls["pure"].hasse_nonzero_fq, q, 3, 2, repeat=1)
        comp, _ = time_call(impls["compiled"].hasse_nonzero_fq, q, 3, 2, repeat=1)
        print(f"\nspeedup at q={q}: {pure/comp:.0f}x")


if __name__ == "__main__":
    main()
