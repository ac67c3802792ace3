#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs identical Monte Carlo trials under both backends and reports wall time
per trial plus the speedup. Both backends consume the same uniform draws, so
the outputs are checked for exact equality while timing.

Usage: python benchmarks/bench_backends.py [--n-items N] [--trials T] [--repeat R]
"""

import argparse
import time

from pipeuq import ClassifierProfile, DomainSpec, FixerSpec
from pipeuq._kernels import HAVE_NUMBA
from pipeuq.simulator import run_trial, trial_seed


def time_backend(backend, domain, profile, fixer, recall, trials, repeat):
    best = float("inf")
    outcomes = None
    for _ in range(repeat):
        start = time.perf_counter()
        outcomes = [
            run_trial(domain, profile, fixer, recall, trial_seed(7, "optimistic", i), backend)
            for i in range(trials)
        ]
        best = min(best, time.perf_counter() - start)
    return best, outcomes


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-items", type=int, default=100_000)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    domain = DomainSpec(args.n_items, 0.5)
    profile = ClassifierProfile(1.0, specificity=0.0)
    fixer = FixerSpec(0.7)
    recall = 0.74

    print(f"population {args.n_items:,} items, {args.trials} trials, best of {args.repeat}")

    t_numpy, out_numpy = time_backend("numpy", domain, profile, fixer, recall, args.trials, args.repeat)
    print(f"numpy : {t_numpy:8.3f} s total  {1000 * t_numpy / args.trials:7.2f} ms/trial")

    if not HAVE_NUMBA:
        print("numba : not installed, skipping")
        return

    # warm-up compiles the kernels outside the timed region
    run_trial(domain, profile, fixer, recall, 0, "numba")
    t_numba, out_numba = time_backend("numba", domain, profile, fixer, recall, args.trials, args.repeat)
    print(f"numba : {t_numba:8.3f} s total  {1000 * t_numba / args.trials:7.2f} ms/trial")
    print(f"speedup: {t_numpy / t_numba:.2f}x")

    assert out_numpy == out_numba, "backends diverged"
    print("outputs identical across backends")


if __name__ == "__main__":
    main()
