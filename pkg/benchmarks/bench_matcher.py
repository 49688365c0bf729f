#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure numpy/Python fallbacks.

Runs the indexed matcher on synthetic shift pairs of growing size with both
backends (plus the naive reference at small sizes) and times the synthetic
generator the same way. Outputs one table per stage.

Usage: python benchmarks/bench_matcher.py [--repeats 5]
"""

import argparse
import time

from predmatch import (Beta, Identity, MatchConfig, MatchCriterion, SynthSpec,
                       make_shift_pair, match_greedy, match_indexed,
                       sample_set)
from predmatch import _backend

MATCH_SIZES = [(800, 400), (2000, 500), (10000, 2000), (50000, 10000),
               (200000, 40000)]
SYNTH_SIZES = [10000, 50000, 200000]
REFERENCE_CUTOFF = 1000  # the naive scan is only sensible at small n, m


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def fmt(seconds):
    return f"{seconds * 1e3:9.1f} ms"


def bench_matcher(repeats):
    print(f"\nindexed matcher, epsilon=0.005, probability-only "
          f"(best of {repeats})")
    header = f"{'n_src':>8} {'n_tgt':>8} {'numba':>12} {'numpy':>12} {'reference':>12}"
    print(header)
    print("-" * len(header))
    cfg = MatchConfig(epsilon=0.005, criterion=MatchCriterion.PROBABILITY_ONLY,
                      seed=0)
    for n_src, n_tgt in MATCH_SIZES:
        src, tgt = make_shift_pair(
            SynthSpec(n_src, 10, Beta(8, 2), Identity()),
            SynthSpec(n_tgt, 10, Beta(5, 3), Identity()),
            seed=42,
        )
        row = f"{n_src:>8} {n_tgt:>8}"
        if _backend.numba_available():
            match_indexed(src, tgt, cfg, backend="numba")  # warm-up / JIT
            row += " " + fmt(best_of(
                lambda: match_indexed(src, tgt, cfg, backend="numba"), repeats))
        else:
            row += f" {'n/a':>12}"
        row += " " + fmt(best_of(
            lambda: match_indexed(src, tgt, cfg, backend="numpy"), repeats))
        if max(n_src, n_tgt) <= REFERENCE_CUTOFF:
            row += " " + fmt(best_of(
                lambda: match_greedy(src, tgt, cfg), repeats))
        else:
            row += f" {'skipped':>12}"
        print(row)


def bench_synth(repeats):
    print(f"\nsynthetic generator, Beta(8,2), identity calibration "
          f"(best of {repeats})")
    header = f"{'n':>8} {'numba':>12} {'python':>12}"
    print(header)
    print("-" * len(header))
    for n in SYNTH_SIZES:
        spec = SynthSpec(n, 10, Beta(8, 2), Identity())
        row = f"{n:>8}"
        if _backend.numba_available():
            sample_set(spec, seed=1, backend="numba")  # warm-up / JIT
            row += " " + fmt(best_of(
                lambda: sample_set(spec, seed=1, backend="numba"), repeats))
        else:
            row += f" {'n/a':>12}"
        row += " " + fmt(best_of(
            lambda: sample_set(spec, seed=1, backend="numpy"), repeats))
        print(row)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    print(f"numba available: {_backend.numba_available()}  "
          f"(default backend: {_backend.default_backend()})")
    bench_matcher(args.repeats)
    bench_synth(args.repeats)


if __name__ == "__main__":
    main()
