"""Time the compiled kernels against the pure fallback.

    python3 bench/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from creature_lab import _purepy

try:
    from creature_lab import _speedups
except ImportError:
    _speedups = None


def clique_case(m, seed=0):
    # random 2-coloring of pairs on m points, symmetric, uint8
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(m, m), dtype=np.uint8)
    a = np.triu(a, 1)
    return np.ascontiguousarray(a + a.T)


def hits_case(n, L, seed=0):
    rng = np.random.default_rng(seed)
    target = np.sort(rng.integers(0, L, size=n)).astype(np.int64)
    step = (np.arange(L, dtype=np.int64) * 2 + 1)
    return target, step


def run(repeat):
    cases = [
        ("mono_subset m=18 size=4", lambda k: k.mono_subset(clique_case(18), 4, 0)),
        ("mono_subset m=32 size=5", lambda k: k.mono_subset(clique_case(32, 1), 5, 1)),
        ("first_hits n=1e4 L=1e5", lambda k, a=hits_case(10 ** 4, 10 ** 5): k.first_hits(*a, 16)),
        ("first_hits n=1e5 L=1e6", lambda k, a=hits_case(10 ** 5, 10 ** 6): k.first_hits(*a, 16)),
    ]
    print(f"{'case':28s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn in cases:
        tp = min(timeit.repeat(lambda: fn(_purepy), number=1, repeat=repeat))
        if _speedups is None:
            print(f"{name:28s} {tp * 1e3:9.2f}ms {'n/a':>10s}")
            continue
        # both backends must agree before timing means anything
        a, b = fn(_purepy), fn(_speedups)
        assert (a is None and b is None) or list(np.asarray(a)) == list(np.asarray(b)), name
        tc = min(timeit.repeat(lambda: fn(_speedups), number=1, repeat=repeat))
        print(f"{name:28s} {tp * 1e3:9.2f}ms {tc * 1e3:9.2f}ms {tp / tc:7.1f}x")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    run(ap.parse_args().repeat)
