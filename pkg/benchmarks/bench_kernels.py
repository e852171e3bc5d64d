"""Compare the compiled kernels against the pure-Python fallback.

Both backends compute bit-identical results (see tests/test_kernels.py);
this script measures what the compiled extension buys on realistic sizes:
signal lengths in the range of the bundled loaders and tent stacking on
the default 100-point grid.

Usage: python benchmarks/bench_kernels.py [--repeats N] [--signals N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from topogate.kernels import available_backends


def _best(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_pairs(backends, lengths, signals, repeats):
    rng = np.random.default_rng(0)
    rows = []
    for n in lengths:
        batch = [rng.normal(size=n) for _ in range(signals)]
        times = {}
        for name, mod in backends.items():
            times[name] = _best(
                lambda mod=mod: [mod.sublevel_pairs(v) for v in batch], repeats
            )
        rows.append((f"sublevel_pairs n={n} x{signals}", times))
    return rows

def bench_tents(backends, pair_counts, signals, repeats):
    rng = np.random.default_rng(1)
    grid = np.linspace(0.0, 1.0, 100)
    rows = []
    for count in pair_counts:
        batch = []
        for _ in range(signals):
            births = rng.uniform(0.0, 0.9, size=count)
            deaths = births + rng.uniform(1e-3, 0.1, size=count)
            batch.append((births, deaths))
        times = {}
        for name, mod in backends.items():
            times[name] = _best(
                lambda mod=mod: [mod.tent_stack(b, d, grid, 10) for b, d in batch],
                repeats,
            )
        rows.append((f"tent_stack pairs={count} x{signals}", times))
    return rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="best-of repetitions")
    parser.add_argument("--signals", type=int, default=200, help="signals per batch")
    args = parser.parse_args()

    backends = available_backends()
    names = sorted(backends)
    print(f"available backends: {', '.join(names)}")
    if "cython" not in backends:
        print("compiled extension not built; showing the pure-Python backend alone")

    rows = bench_pairs(backends, (140, 187, 500, 2000), args.signals, args.repeats)
    rows += bench_tents(backends, (5, 20, 60), args.signals, args.repeats)

    width = max(len(label) for label, _ in rows)
    header = f"{'case':<{width}}  " + "  ".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    for label, times in rows:
        cells = "  ".join(f"{times[n] * 1e3:>9.2f} ms" for n in names)
        line = f"{label:<{width}}  {cells}"
        if len(names) == 2:
            line += f"  {times['python'] / times['cython']:>7.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
