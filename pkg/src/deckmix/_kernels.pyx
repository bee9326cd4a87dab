# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte-Carlo kernels; mirrors ``_kernels_py`` draw for draw."""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free

import numpy as np

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL

cdef enum:
    K_TOP = 0
    K_GSR = 1
    K_PHYSICAL = 2
    K_NAIVE = 3
    K_PERM = 4

KIND_TOP = K_TOP
KIND_GSR = K_GSR
KIND_PHYSICAL = K_PHYSICAL
KIND_NAIVE = K_NAIVE
KIND_PERM = K_PERM


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t next_u64(uint64_t* state) noexcept nogil:
    state[0] += GAMMA
    return mix64(state[0])


cdef inline uint64_t below(uint64_t* state, uint64_t m) noexcept nogil:
    # (2**64 - m) % m == 2**64 mod m in wrapping arithmetic
    cdef uint64_t threshold = (<uint64_t>0 - m) % m
    cdef uint64_t x
    while True:
        x = next_u64(state)
        if x >= threshold:
            return x % m


cdef void top_step(int* deck, int* out, int n, uint64_t* st) noexcept nogil:
    cdef int j = <int>below(st, n)
    cdef int i
    for i in range(j):
        out[i] = deck[i + 1]
    out[j] = deck[0]
    for i in range(j + 1, n):
        out[i] = deck[i]


cdef void gsr_step(int* deck, int* out, int n, int a, int* left, int* nxt, uint64_t* st) noexcept nogil:
    cdef int t, i, acc = 0
    cdef uint64_t u
    for t in range(a):
        left[t] = 0
    for i in range(n):
        left[below(st, a)] += 1
    for t in range(a):
        nxt[t] = acc
        acc += left[t]
    for i in range(n):
        u = below(st, n - i)
        t = 0
        while u >= <uint64_t>left[t]:
            u -= left[t]
            t += 1
        out[i] = deck[nxt[t]]
        nxt[t] += 1
        left[t] -= 1


cdef void physical_step(int* deck, int* out, int n, int spread, int max_packet, uint64_t* st) noexcept nogil:
    cdef int half = n // 2
    cdef int lo = half - spread
    cdef int hi = half + spread
    cdef int c, side, i, j, o = 0, size, room, k
    if lo < 0:
        lo = 0
    if hi > n:
        hi = n
    c = lo + <int>below(st, hi - lo + 1)
    side = <int>below(st, 2)
    i = 0
    j = c
    while i < c and j < n:
        if side == 0:
            room = c - i
            if room > max_packet:
                room = max_packet
            size = 1 + <int>below(st, room)
            for k in range(size):
                out[o] = deck[i + k]
                o += 1
            i += size
        else:
            room = n - j
            if room > max_packet:
                room = max_packet
            size = 1 + <int>below(st, room)
            for k in range(size):
                out[o] = deck[j + k]
                o += 1
            j += size
        side ^= 1
    while i < c:
        out[o] = deck[i]
        o += 1
        i += 1
    while j < n:
        out[o] = deck[j]
        o += 1
        j += 1


cdef void naive_step(int* deck, int* out, int n, uint64_t* st) noexcept nogil:
    cdef int i, j, tmp
    for i in range(n):
        out[i] = deck[i]
    for i in range(n - 1, 0, -1):
        j = <int>below(st, i + 1)
        tmp = out[i]
        out[i] = out[j]
        out[j] = tmp


cdef int64_t lehmer_rank(int* deck, int n) noexcept nogil:
    cdef int64_t r = 0
    cdef int i, j, smaller
    for i in range(n):
        smaller = 0
        for j in range(i + 1, n):
            if deck[j] < deck[i]:
                smaller += 1
        r = r * (n - i) + smaller
    return r


cdef int run_block(int kind, int n, int hands, uint64_t seed, int64_t start, int64_t stop,
                   int p1, int p2, int* perm, int64_t* counts) noexcept nogil:
    cdef int* deck = <int*>malloc(n * sizeof(int))
    cdef int* out = <int*>malloc(n * sizeof(int))
    cdef int a = p1 if kind == K_GSR else 1
    cdef int* left = <int*>malloc(a * sizeof(int))
    cdef int* nxt = <int*>malloc(a * sizeof(int))
    cdef int* tmp
    cdef int64_t trial
    cdef int h, i
    cdef uint64_t st
    if deck == NULL or out == NULL or left == NULL or nxt == NULL:
        free(deck); free(out); free(left); free(nxt)
        return -1
    for trial in range(start, stop):
        st = mix64(seed + <uint64_t>(trial + 1) * GAMMA)
        for i in range(n):
            deck[i] = i
        for h in range(hands):
            if kind == K_TOP:
                top_step(deck, out, n, &st)
            elif kind == K_GSR:
                gsr_step(deck, out, n, a, left, nxt, &st)
            elif kind == K_PHYSICAL:
                physical_step(deck, out, n, p1, p2, &st)
            elif kind == K_NAIVE:
                naive_step(deck, out, n, &st)
            else:
                for i in range(n):
                    out[i] = deck[perm[i] - 1]
            tmp = deck
            deck = out
            out = tmp
        counts[lehmer_rank(deck, n)] += 1
    free(deck); free(out); free(left); free(nxt)
    return 0


def run_counts(int kind, int n, int hands, uint64_t seed, int64_t start, int64_t stop,
               int p1=0, int p2=0, perm=None):
    """Rank histogram of trials ``start..stop-1``; releases the GIL while running."""
    if kind < 0 or kind > K_PERM:
        raise ValueError(f"unknown kernel kind {kind}")
    cdef int64_t size = 1
    cdef int i
    for i in range(2, n + 1):
        size *= i
    counts_arr = np.zeros(size, dtype=np.int64)
    cdef int64_t[::1] counts = counts_arr
    perm_arr = np.asarray(perm if perm is not None else np.arange(1, n + 1), dtype=np.intc)
    cdef int[::1] perm_view = perm_arr
    cdef int rc
    with nogil:
        rc = run_block(kind, n, hands, seed, start, stop, p1, p2, &perm_view[0], &counts[0])
    if rc:
        raise MemoryError()
    return counts_arr
