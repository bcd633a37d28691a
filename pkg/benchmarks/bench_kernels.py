"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]
"""
import argparse
import math
import timeit

import numpy as np

from sagnac import kernels
from sagnac.analyzers import AnalyzerSettings
from sagnac.coincidence import CLASSICAL, coincidence_grid_mc
from sagnac.pairmodel import SourceConfig


def cases(n):
    rng = np.random.default_rng(0)
    dj, dk = rng.normal(0, 2 * math.pi * 1e9, (2, n))
    t1, t2 = rng.uniform(0, 1e-6, (2, n))
    xis = np.linspace(0, math.pi, 36, endpoint=False)
    thetas = np.full(36, math.pi / 4)
    values = rng.normal(size=n)
    p2 = math.pi / 2
    return {
        "signal_intensity": lambda m: m.signal_intensity(dj, dk, t1, t2, 0.3, 1.0, p2),
        "coincidence/post": lambda m: m.coincidence(dj, dk, t1, t2, t1, t2, 0.3, 1.1, 1.0, p2, True),
        "coincidence/classical": lambda m: m.coincidence(dj, dk, t1, t2, t1, t2, 0.3, 1.1, 1.0, p2, False),
        "coincidence_grid x36": lambda m: m.coincidence_grid(dj, dk, t1, t2, t1, t2, xis, thetas, 1.0, p2, False),
        "moments": lambda m: m.moments(values),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = kernels.available_backends()
    names = sorted(backends)
    print(f"n = {args.n}, best of {args.repeat}; backends: {', '.join(names)}")
    print(f"{'kernel':<24}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases(args.n).items():
        best = {}
        for name in names:
            impl = backends[name]
            best[name] = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat))
        line = f"{label:<24}" + "".join(f"{best[n] * 1e3:>10.1f}ms" for n in names)
        if "cython" in best:
            line += f"{best['python'] / best['cython']:>11.1f}x"
        print(line)

    # end to end: one classical theta scan through the ensemble harness
    grid = [AnalyzerSettings(math.pi / 4, t) for t in np.linspace(0, math.pi, 36, endpoint=False)]
    for name in names:
        kernels._impl = backends[name]
        t = min(timeit.repeat(lambda: coincidence_grid_mc(grid, SourceConfig(), CLASSICAL, args.n), number=1, repeat=2))
        print(f"{'ensemble scan x36':<24}{name:>12}{t * 1e3:>10.1f}ms")


if __name__ == "__main__":
    main()
