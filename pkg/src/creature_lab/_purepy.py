"""Reference implementations of the compiled kernels (numpy / plain python)."""

import numpy as np


def mono_subset(col, size, color):
    """Lexicographically least size-subset whose pairs all carry `color`."""
    col = np.asarray(col)
    m = col.shape[0]
    if size <= 0:
        return []
    if size > m:
        return None
    adj = [0] * m
    for i in range(m):
        row = col[i]
        bits = 0
        for j in range(m):
            if i != j and row[j] == color:
                bits |= 1 << j
        adj[i] = bits
    out = []

    def dfs(cand, need):
        if need == 0:
            return True
        while cand:
            if bin(cand).count("1") < need:
                return False
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            out.append(v)
            if dfs(cand & adj[v], need - 1):
                return True
            out.pop()
        return False

    return out if dfs((1 << m) - 1, size) else None


def first_hits(target, step, kmax):
    target = np.asarray(target, dtype=np.int64)
    step = np.asarray(step, dtype=np.int64)
    N, L = len(target), len(step)
    res = np.full(N, -1, dtype=np.int64)
    res[target < 0] = -2
    live = target >= 0
    x = np.arange(N, dtype=np.int64)
    for j in range(kmax + 1):
        hit = live & (target <= x)
        res[hit] = j
        live &= ~hit
        if j == kmax or not live.any():
            break
        inside = x < L
        nxt = np.full(N, -1, dtype=np.int64)
        nxt[inside] = step[x[inside]]
        lost = live & (nxt < 0)
        res[lost] = -2
        live &= ~lost
        x = np.where(live, nxt, 0)
    return res
