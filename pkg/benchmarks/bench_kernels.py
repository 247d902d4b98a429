#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python reference.

Runs each hot kernel on representative workloads with both backends and
prints the per-call time and speedup. Usage:

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import random
import timeit

from parsim.kernels import _ref

try:
    from parsim.kernels import _core
except ImportError:
    _core = None


def life_workload(side: int):
    pyrng = random.Random(1)
    board = [pyrng.random() < 0.4 for _ in range(side * side)]
    return lambda mod: mod.life_next(board, side, side, True)


def pastoral_workload(cells: int):
    pyrng = random.Random(2)
    fresh = [pyrng.random() for _ in range(cells)]
    args = (
        [pyrng.random() for _ in range(cells)],
        fresh,
        [pyrng.random() * (1 - f) for f in fresh],
        [pyrng.randrange(0, 3) for _ in range(cells)],
        0.08, 0.02, 0.05, 0.25, 0.15, 0.2, 0.05,
    )
    return lambda mod: mod.pastoral_patch_update(*args)


def digest_workload(size: int):
    data = random.Random(3).randbytes(size)
    return lambda mod: mod.fnv1a64_digest(data)


WORKLOADS = [
    ("life_next 64x64 torus", life_workload(64)),
    ("pastoral_patch_update 2500 cells", pastoral_workload(2500)),
    ("fnv1a64_digest 64 KiB", digest_workload(64 * 1024)),
]


def bench(fn, repeat: int) -> float:
    """Best-of-5 per-call seconds."""
    return min(timeit.repeat(fn, number=repeat, repeat=5)) / repeat


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=20,
                        help="calls per timing sample (default 20)")
    args = parser.parse_args()

    if _core is None:
        print("compiled backend not built; showing pure-Python times only")
    header = f"{'kernel':<36} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, call in WORKLOADS:
        py = bench(lambda: call(_ref), args.repeat)
        if _core is not None:
            cc = bench(lambda: call(_core), args.repeat)
            print(f"{name:<36} {py * 1e3:>10.3f}ms {cc * 1e3:>10.3f}ms "
                  f"{py / cc:>8.1f}x")
        else:
            print(f"{name:<36} {py * 1e3:>10.3f}ms {'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
