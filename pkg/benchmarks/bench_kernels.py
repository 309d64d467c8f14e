"""Compare the compiled and numpy sampling kernels.

    python benchmarks/bench_kernels.py [--n 10000000] [--repeat 5]

Both backends are run on the same stream and their outputs are checked to be
identical before any timing is reported.
"""

import argparse
import time

import numpy as np

from condent import _backend
from condent.simulation import stream_key, thresholds, zipf_joint


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--cells", type=int, default=6, help="support size (Zipf(2, cells) flat pmf)")
    args = ap.parse_args()

    probs = zipf_joint(2.0, args.cells // 2, 2).probs if args.cells % 2 == 0 else None
    if probs is None:
        raise SystemExit("--cells must be even")
    table = thresholds(probs)
    key = stream_key(1, args.n)
    names = _backend.available()
    ref = None
    print(f"n={args.n:,} cells={args.cells} repeat={args.repeat}")
    for name in names:
        k = _backend.get(name)
        counts = k.draw_counts(table, key, args.n)
        if ref is None:
            ref = counts
        elif not np.array_equal(ref, counts):
            raise SystemExit(f"{name} disagrees with {names[0]}")
        t_counts = best_of(lambda: k.draw_counts(table, key, args.n), args.repeat)
        t_out = best_of(lambda: k.draw_outcomes(table, key, args.n), args.repeat)
        print(f"{name:>8}: draw_counts {t_counts:.3f}s ({args.n / t_counts / 1e6:.0f} M/s), "
              f"draw_outcomes {t_out:.3f}s")


if __name__ == "__main__":
    main()
