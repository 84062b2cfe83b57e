import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from creature_lab import _purepy, kernels

try:
    from creature_lab import _speedups
except ImportError:
    _speedups = None

BACKENDS = [_purepy] + ([_speedups] if _speedups is not None else [])


def _sym(m, seed):
    rng = np.random.default_rng(seed)
    a = np.triu(rng.integers(0, 2, size=(m, m), dtype=np.uint8), 1)
    return np.ascontiguousarray(a + a.T)


def _brute(col, size, color):
    m = col.shape[0]
    for sub in itertools.combinations(range(m), size):
        if all(col[i, j] == color for i, j in itertools.combinations(sub, 2)):
            return list(sub)
    return None


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
@given(st.integers(3, 11), st.integers(2, 4), st.integers(0, 1), st.integers(0, 10 ** 6))
def test_mono_subset_lex_first(k, m, size, color, seed):
    col = _sym(m, seed)
    got = k.mono_subset(col, size, color)
    want = _brute(col, size, color)
    assert (None if got is None else list(got)) == want


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.__name__.rsplit(".", 1)[-1])
@given(st.integers(0, 10 ** 6), st.integers(0, 6))
def test_first_hits_matches_loop(k, seed, kmax):
    rng = np.random.default_rng(seed)
    L = 200
    step = np.sort(rng.integers(1, 400, size=L)).astype(np.int64)
    step = np.maximum(step, np.arange(L) + 1)
    target = rng.integers(-1, 300, size=50).astype(np.int64)
    got = np.asarray(k.first_hits(target, step, kmax))
    for n, t in enumerate(target):
        if t < 0:
            want = -2
        else:
            x, want = n, -1
            for j in range(kmax + 1):
                if t <= x:
                    want = j
                    break
                if j == kmax:
                    break
                if x >= L:
                    want = -2
                    break
                x = int(step[x])
        assert got[n] == want


def test_dispatch():
    assert kernels.BACKEND in ("python", "cython")
    if _speedups is not None:
        assert kernels.BACKEND == "cython" or __import__("os").environ.get("CREATURE_LAB_PURE") == "1"
