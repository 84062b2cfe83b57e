# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot loops: monochromatic subset search and iterate counting."""

from libc.stdint cimport uint64_t, int64_t, uint8_t

import numpy as np

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef int _dfs(uint64_t *adj, uint64_t cand, int need, int *out, int depth) nogil:
    cdef uint64_t rest
    cdef int v
    if need == 0:
        return 1
    while cand:
        if __builtin_popcountll(cand) < need:
            return 0
        v = __builtin_ctzll(cand)
        cand &= cand - 1
        out[depth] = v
        # only later vertices, so the first hit is the lexicographically least subset
        rest = cand & adj[v]
        if _dfs(adj, rest, need - 1, out, depth + 1):
            return 1
    return 0


def mono_subset(const uint8_t[:, :] col, int size, int color):
    """Lexicographically least `size`-subset of 0..m-1 on which every pair has `color`.

    Returns a list of indices or None. m must be at most 64.
    """
    cdef int m = col.shape[0]
    cdef int i, j
    cdef uint64_t adj[64]
    cdef int out[64]
    if m > 64:
        raise ValueError("mono_subset handles at most 64 vertices")
    if size <= 0:
        return []
    if size > m:
        return None
    for i in range(m):
        adj[i] = 0
        for j in range(m):
            if i != j and col[i, j] == color:
                adj[i] |= (<uint64_t>1) << j
    cdef uint64_t full = ((<uint64_t>1) << m) - 1 if m < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    if _dfs(adj, full, size, out, 0):
        return [out[i] for i in range(size)]
    return None


def first_hits(const int64_t[:] target, const int64_t[:] step, int kmax):
    """For each n, least j <= kmax with target[n] <= step^j(n).

    -1 means no such j, -2 means the orbit left the tabulated range (or the
    target itself was not evaluable) before deciding.
    """
    cdef Py_ssize_t n, L = step.shape[0], N = target.shape[0]
    cdef int64_t x, t
    cdef int j
    res = np.empty(N, dtype=np.int64)
    cdef int64_t[:] r = res
    with nogil:
        for n in range(N):
            t = target[n]
            if t < 0:
                r[n] = -2
                continue
            x = n
            r[n] = -1
            for j in range(kmax + 1):
                if t <= x:
                    r[n] = j
                    break
                if j == kmax:
                    break
                if x >= L or step[x] < 0:
                    r[n] = -2
                    break
                x = step[x]
    return res
