#!/usr/bin/env python3
"""Time the compiled kernels against the NumPy fallback.

Usage: python benchmarks/bench_backends.py [--repeats N]

Evaluates the three grid kernels on growing grids with the standard geometry
and prints a speedup table.  The compiled extension must be built (it is by
default under `pip install -e . --no-build-isolation`); otherwise only the
NumPy numbers are shown.
"""
import argparse
import importlib.util
import math
import timeit

import numpy as np

from whichway import _kernels_np

HAVE_EXT = importlib.util.find_spec("whichway._kernels_cy") is not None
if HAVE_EXT:
    from whichway import _kernels_cy

LAM, D, L, EPS = 5e-7, 1e-4, 1.0, 1e-5
TAU = LAM * L / (2 * math.pi)
SQ = math.sqrt(0.5)


def _cases(xs):
    ip = 0.6 * np.exp(-0.9j)
    return {
        "direct": lambda mod: mod.direct_grid(xs, D, EPS, TAU, SQ, SQ, ip),
        "closed": lambda mod: mod.closed_grid(xs, D, EPS, TAU, 0.6, 0.9),
        "conditional": lambda mod: mod.conditional_grid(
            xs, D, EPS, TAU, SQ, SQ, SQ, SQ, SQ, -SQ
        ),
    }


def _best_ms(fn, repeats):
    timer = timeit.Timer(fn)
    number = max(1, timer.autorange()[0] // 4)
    return min(timer.repeat(repeats, number)) / number * 1e3


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"compiled extension available: {HAVE_EXT}")
    header = f"{'kernel':<12} {'n':>8} {'numpy ms':>10}"
    if HAVE_EXT:
        header += f" {'cython ms':>10} {'speedup':>8}"
    print(header)
    for n in (4096, 16384, 65536, 262144):
        xs = np.linspace(-0.025, 0.025, n)
        for name, call in _cases(xs).items():
            t_np = _best_ms(lambda: call(_kernels_np), args.repeats)
            line = f"{name:<12} {n:>8} {t_np:>10.3f}"
            if HAVE_EXT:
                t_cy = _best_ms(lambda: call(_kernels_cy), args.repeats)
                line += f" {t_cy:>10.3f} {t_np / t_cy:>7.2f}x"
            print(line)


if __name__ == "__main__":
    main()
