"""Independent brute-force references.

Nothing here imports deckmix: decks are plain tuples, laws are dicts keyed
by tuple, and chains are evolved by direct simulation of every outcome.
"""

from fractions import Fraction
from itertools import permutations, product
from math import comb, factorial


def all_decks(n):
    return list(permutations(range(1, n + 1)))


def count_rising(deck):
    pos = {v: i for i, v in enumerate(deck)}
    return 1 + sum(pos[v + 1] < pos[v] for v in range(1, len(deck)))


def top_law(n):
    law = {}
    for j in range(n):
        d = list(range(2, n + 1))
        d.insert(j, 1)
        law[tuple(d)] = law.get(tuple(d), 0) + Fraction(1, n)
    return law


def riffle_law(n):
    """GSR riffle by enumerating all 2^n binary words: word[i] says which
    packet the i-th card of the new deck comes from."""
    law = {}
    for word in product((0, 1), repeat=n):
        c = word.count(0)
        nxt = [1, c + 1]
        deck = []
        for w in word:
            deck.append(nxt[w])
            nxt[w] += 1
        law[tuple(deck)] = law.get(tuple(deck), 0) + Fraction(1, 2**n)
    return law


def physical_law(n, spread, max_packet):
    """Enumerate every (cut, starting side, packet size list) choice."""
    half = n // 2
    cuts = [c for c in range(half - spread, half + spread + 1) if 0 <= c <= n]
    law = {}

    def go(a, b, side, deck, p):
        if not a or not b:
            d = tuple(deck + a + b)
            law[d] = law.get(d, 0) + p
            return
        src = a if side == 0 else b
        m = min(max_packet, len(src))
        for s in range(1, m + 1):
            if side == 0:
                go(a[s:], b, 1, deck + a[:s], p / m)
            else:
                go(a, b[s:], 0, deck + b[:s], p / m)

    for c in cuts:
        for side in (0, 1):
            go(list(range(1, c + 1)), list(range(c + 1, n + 1)), side, [], Fraction(1, 2 * len(cuts)))
    return law


def apply(deck, shuffled):
    """Deck after a shuffle that turns the sorted deck into ``shuffled``."""
    return tuple(deck[x - 1] for x in shuffled)


def evolve_law(start, step, k):
    law = {start: Fraction(1)}
    for _ in range(k):
        nxt = {}
        for s, ps in law.items():
            for p, q in step.items():
                t = apply(s, p)
                nxt[t] = nxt.get(t, 0) + ps * q
        law = nxt
    return law


def tv_to_uniform(law, n):
    u = Fraction(1, factorial(n))
    return sum((abs(law.get(d, 0) - u) for d in all_decks(n)), Fraction(0)) / 2


def distance_curve(step, n, k_max):
    start = tuple(range(1, n + 1))
    return [tv_to_uniform(evolve_law(start, step, k), n) for k in range(k_max + 1)]


def riffle_distance_by_formula(n, k):
    """Closed form evaluated arrangement by arrangement (no Eulerian table)."""
    a = 2**k
    u = Fraction(1, factorial(n))
    return sum(abs(Fraction(comb(a + n - count_rising(d), n), a**n) - u) for d in all_decks(n)) / 2


def coupling_product(n, k):
    prod = Fraction(1)
    for j in range(1, n):
        prod *= 1 - Fraction(j, 2**k)
    return 1 - prod
