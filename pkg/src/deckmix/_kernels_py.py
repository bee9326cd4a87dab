"""Pure-Python Monte-Carlo kernels.

Reference implementation of the compiled ``_kernels`` extension; the two
must produce identical counts for identical arguments. Decks here are
lists of 0-based labels.

Random numbers: each trial owns a SplitMix64 stream whose initial state
is ``mix64(seed + (trial + 1) * GAMMA)``. Bounded integers use rejection
sampling (values below ``2**64 mod m`` are redrawn) so they carry no
modulo bias.
"""

from math import factorial

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15

KIND_TOP = 0
KIND_GSR = 1
KIND_PHYSICAL = 2
KIND_NAIVE = 3
KIND_PERM = 4


def mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_state(seed, trial):
    return mix64((seed + (trial + 1) * GAMMA) & MASK64)


class SplitMix64:
    """64-bit SplitMix generator; ``SplitMix64(seed, trial)`` is that trial's stream."""

    __slots__ = ("state",)

    def __init__(self, seed=0, trial=0):
        if not 0 <= seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.state = stream_state(seed, trial)

    def next_u64(self):
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def below(self, m):
        """Uniform integer in [0, m)."""
        threshold = ((1 << 64) - m) % m
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % m


def top_step(deck, rng):
    card = deck.pop(0)
    deck.insert(rng.below(len(deck) + 1), card)
    return deck


def gsr_step(deck, a, rng):
    n = len(deck)
    left = [0] * a
    for _ in range(n):
        left[rng.below(a)] += 1
    nxt = [0] * a
    acc = 0
    for t in range(a):
        nxt[t] = acc
        acc += left[t]
    out = [0] * n
    for i in range(n):
        u = rng.below(n - i)
        t = 0
        while u >= left[t]:
            u -= left[t]
            t += 1
        out[i] = deck[nxt[t]]
        nxt[t] += 1
        left[t] -= 1
    return out


def physical_step(deck, spread, max_packet, rng):
    n = len(deck)
    half = n // 2
    lo = max(0, half - spread)
    hi = min(n, half + spread)
    c = lo + rng.below(hi - lo + 1)
    side = rng.below(2)
    i, j = 0, c
    out = []
    while i < c and j < n:
        if side == 0:
            size = 1 + rng.below(min(max_packet, c - i))
            out.extend(deck[i : i + size])
            i += size
        else:
            size = 1 + rng.below(min(max_packet, n - j))
            out.extend(deck[j : j + size])
            j += size
        side ^= 1
    out.extend(deck[i:c])
    out.extend(deck[j:n])
    return out


def naive_step(deck, rng):
    for i in range(len(deck) - 1, 0, -1):
        j = rng.below(i + 1)
        deck[i], deck[j] = deck[j], deck[i]
    return deck


def perm_step(deck, perm):
    return [deck[p - 1] for p in perm]


def apply_step(kind, deck, rng, p1, p2, perm):
    if kind == KIND_TOP:
        return top_step(deck, rng)
    if kind == KIND_GSR:
        return gsr_step(deck, p1, rng)
    if kind == KIND_PHYSICAL:
        return physical_step(deck, p1, p2, rng)
    if kind == KIND_NAIVE:
        return naive_step(deck, rng)
    if kind == KIND_PERM:
        return perm_step(deck, perm)
    raise ValueError(f"unknown kernel kind {kind}")


def lehmer_rank(deck):
    n = len(deck)
    r = 0
    for i in range(n):
        smaller = 0
        for j in range(i + 1, n):
            if deck[j] < deck[i]:
                smaller += 1
        r = r * (n - i) + smaller
    return r


def run_counts(kind, n, hands, seed, start, stop, p1=0, p2=0, perm=None):
    """Rank histogram of trials ``start..stop-1``, each shuffled ``hands`` times."""
    counts = np.zeros(factorial(n), dtype=np.int64)
    for trial in range(start, stop):
        rng = SplitMix64(seed, trial)
        deck = list(range(n))
        for _ in range(hands):
            deck = apply_step(kind, deck, rng, p1, p2, perm)
        counts[lehmer_rank(deck)] += 1
    return counts
