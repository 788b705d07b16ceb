"""Compiled inner loops for the map builders.

Words arrive as uint32 pairs (k_a, k_b) per element; all arithmetic is in
int64, which holds i * k_a + k_b for block sizes up to 2**31.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def raw_trace(words, n):
    out = np.empty(n, np.int64)
    for i in range(n):
        out[i] = (i * np.int64(words[2 * i]) + np.int64(words[2 * i + 1])) % n
    return out


@njit(cache=True)
def iteration_map(words, n):
    forward = np.empty(n, np.int64)
    used = np.zeros(n, np.bool_)
    for i in range(n):
        ka = np.int64(words[2 * i])
        pos = (i * ka + np.int64(words[2 * i + 1])) % n
        step = 1 if ka & 1 else n - 1
        while used[pos]:
            pos += step
            if pos >= n:
                pos -= n
        used[pos] = True
        forward[i] = pos
    return forward


@njit(cache=True)
def _fenwick_ones(n):
    tree = np.zeros(n + 1, np.int64)
    for i in range(1, n + 1):
        tree[i] += 1
        j = i + (i & -i)
        if j <= n:
            tree[j] += tree[i]
    return tree


@njit(cache=True)
def _select_remove(tree, n, top, rank):
    # binary lifting: smallest position whose prefix count exceeds rank
    pos = 0
    step = top
    while step:
        nxt = pos + step
        if nxt <= n and tree[nxt] <= rank:
            pos = nxt
            rank -= tree[nxt]
        step >>= 1
    k = pos + 1
    while k <= n:
        tree[k] -= 1
        k += k & -k
    return pos


@njit(cache=True)
def unfolding_map(words, n):
    tree = _fenwick_ones(n)
    top = 1
    while top * 2 <= n:
        top *= 2
    forward = np.empty(n, np.int64)
    remaining = n
    for i in range(n):
        inter = (i * np.int64(words[2 * i]) + np.int64(words[2 * i + 1])) % n
        forward[i] = _select_remove(tree, n, top, inter % remaining)
        remaining -= 1
    return forward
