"""Shuffle procedures and their exact one-hand laws.

Stochastic models yield a :class:`StepDistribution` over arrangements of
the sorted deck; deterministic ones (perfect Faro shuffles, Mongean) yield
a single arrangement. A shuffle acts on positions, so applying it to any
deck ``s`` gives ``compose(s, p)`` where ``p`` is the arrangement it makes
from the sorted deck.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, lcm
from typing import Union

from .permcore import (
    Arrangement,
    DeckSizeError,
    check_cap,
    enumerate_arrangements,
    inverse,
    rank,
    rising_sequences,
    unrank,
)

__all__ = [
    "TopInAtRandom",
    "GsrRiffle",
    "PhysicalRiffle",
    "FaroOut",
    "FaroIn",
    "Mongean",
    "NaiveUniform",
    "ShuffleModel",
    "StepDistribution",
    "parse_model",
    "single_shuffle_distribution",
    "brute_force_distribution",
    "deterministic_permutation",
    "deterministic_period",
    "faro_trace",
    "BRUTE_FORCE_PATH_LIMIT",
]

BRUTE_FORCE_PATH_LIMIT = 5_000_000


@dataclass(frozen=True)
class TopInAtRandom:
    """Move the top card to one of the n positions, uniformly."""

    name = "top"
    stochastic = True


@dataclass(frozen=True)
class GsrRiffle:
    """Gilbert-Shannon-Reeds a-shuffle: multinomial cut into ``a`` packets,
    uniformly random interleaving. ``a=2`` is the ordinary riffle."""

    a: int = 2
    name = "gsr"
    stochastic = True

    def __post_init__(self):
        if self.a < 2:
            raise ValueError(f"GSR packet count must be >= 2, got {self.a}")


@dataclass(frozen=True)
class PhysicalRiffle:
    """Hand riffle: cut near the middle, then alternate packets of 1..max_packet.

    The cut size is uniform on ``n//2 - cut_spread .. n//2 + cut_spread``
    clipped to ``0..n``; the starting half is chosen by a fair coin; each
    packet size is uniform on ``1..min(max_packet, cards left in that half)``.
    Once either half runs out the rest of the other half is appended.
    """

    cut_spread: int = 5
    max_packet: int = 5
    name = "physical"
    stochastic = True

    def __post_init__(self):
        if self.cut_spread < 0:
            raise ValueError("cut_spread must be >= 0")
        if self.max_packet < 1:
            raise ValueError("max_packet must be >= 1")

    def cut_range(self, n: int) -> range:
        half = n // 2
        return range(max(0, half - self.cut_spread), min(n, half + self.cut_spread) + 1)


@dataclass(frozen=True)
class FaroOut:
    """Perfect interleave of equal halves; the top card stays on top."""

    name = "faro-out"
    stochastic = False


@dataclass(frozen=True)
class FaroIn:
    """Perfect interleave of equal halves; the second half's top card goes on top."""

    name = "faro-in"
    stochastic = False


@dataclass(frozen=True)
class Mongean:
    """Deal cards from the top onto a new pile, alternately above and below it.

    Card 2 goes above card 1, card 3 below, and so on, which yields
    ``..., 6, 4, 2, 1, 3, 5, ...``; with 52 cards the period is 12.
    """

    name = "mongean"
    stochastic = False


@dataclass(frozen=True)
class NaiveUniform:
    """Every arrangement equally likely (an ideal uniform sampler)."""

    name = "naive"
    stochastic = True


ShuffleModel = Union[TopInAtRandom, GsrRiffle, PhysicalRiffle, FaroOut, FaroIn, Mongean, NaiveUniform]

_BY_NAME = {
    "top": TopInAtRandom,
    "gsr": GsrRiffle,
    "riffle": GsrRiffle,
    "physical": PhysicalRiffle,
    "faro-out": FaroOut,
    "faro-in": FaroIn,
    "mongean": Mongean,
    "naive": NaiveUniform,
}


def parse_model(name: str, **params) -> ShuffleModel:
    """Build a model from its short name, passing through non-None params."""
    try:
        cls = _BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown model {name!r}; choose from {sorted(_BY_NAME)}") from None
    params = {k: v for k, v in params.items() if v is not None}
    return cls(**params)


@dataclass(frozen=True)
class StepDistribution:
    """Sparse exact law over arrangements, keyed by lexicographic rank."""

    n: int
    probs: dict = field(hash=False)

    def __post_init__(self):
        if any(p <= 0 for p in self.probs.values()):
            raise ValueError("step distribution entries must be positive")
        if sum(self.probs.values(), Fraction(0)) != 1:
            raise ValueError("step distribution does not sum to 1")

    def by_arrangement(self) -> dict[Arrangement, Fraction]:
        return {unrank(self.n, r): p for r, p in sorted(self.probs.items())}

    def support(self) -> set[int]:
        return set(self.probs)

    @classmethod
    def from_arrangements(cls, n: int, weights) -> "StepDistribution":
        probs: dict[int, Fraction] = {}
        for arr, p in weights:
            if p:
                r = rank(arr)
                probs[r] = probs.get(r, Fraction(0)) + p
        return cls(n, probs)


def single_shuffle_distribution(model: ShuffleModel, n: int, max_n: int | None = None) -> StepDistribution:
    """Exact one-hand law from the model's closed description."""
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    if isinstance(model, TopInAtRandom):
        rest = list(range(2, n + 1))
        return StepDistribution.from_arrangements(
            n, ((rest[:j] + [1] + rest[j:], Fraction(1, n)) for j in range(n))
        )
    if isinstance(model, GsrRiffle):
        check_cap(n, max_n)
        a = model.a
        denom = a**n
        return StepDistribution.from_arrangements(
            n,
            ((p, Fraction(comb(a + n - rising_sequences(p), n), denom)) for p in enumerate_arrangements(n, max_n)),
        )
    if isinstance(model, NaiveUniform):
        check_cap(n, max_n)
        u = Fraction(1, factorial(n))
        return StepDistribution(n, {r: u for r in range(factorial(n))})
    if isinstance(model, PhysicalRiffle):
        raise ValueError("PhysicalRiffle has no closed-form law; use brute_force_distribution")
    raise ValueError(f"{model.name} is deterministic; use deterministic_permutation")


def brute_force_distribution(
    model: ShuffleModel, n: int, path_limit: int = BRUTE_FORCE_PATH_LIMIT
) -> StepDistribution:
    """Exact one-hand law by walking every branch of the model's random choices."""
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    paths = _PathCounter(path_limit)
    if isinstance(model, GsrRiffle):
        weights = _gsr_paths(model.a, n, paths)
    elif isinstance(model, PhysicalRiffle):
        weights = _physical_paths(model, n, paths)
    elif isinstance(model, TopInAtRandom):
        weights = _top_paths(n, paths)
    elif isinstance(model, NaiveUniform):
        weights = _fisher_yates_paths(n, paths)
    else:
        weights = [(deterministic_permutation(model, n), Fraction(1))]
    return StepDistribution.from_arrangements(n, weights)


class _PathCounter:
    def __init__(self, limit: int):
        self.limit = limit
        self.count = 0

    def tick(self):
        self.count += 1
        if self.count > self.limit:
            raise DeckSizeError(f"choice tree exceeds {self.limit} paths; deck too large for exhaustive enumeration")


def _compositions(n: int, parts: int):
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def _multiset_words(counts: list[int], length: int):
    # Every sequence using symbol i exactly counts[i] times.
    if length == 0:
        yield ()
        return
    for i, c in enumerate(counts):
        if c:
            counts[i] -= 1
            for tail in _multiset_words(counts, length - 1):
                yield (i,) + tail
            counts[i] += 1


def _gsr_paths(a: int, n: int, paths: _PathCounter):
    # Cut into packets of sizes c with probability multinomial(n; c) / a^n,
    # then pick one of the multinomial(n; c) interleavings uniformly:
    # every (cut, interleaving) path weighs 1 / a^n.
    out = []
    weight = Fraction(1, a**n)
    for cut in _compositions(n, a):
        starts = [sum(cut[:i]) + 1 for i in range(a)]
        for word in _multiset_words(list(cut), n):
            paths.tick()
            nxt = list(starts)
            deck = []
            for packet in word:
                deck.append(nxt[packet])
                nxt[packet] += 1
            out.append((deck, weight))
    return out


def _physical_paths(model: PhysicalRiffle, n: int, paths: _PathCounter):
    out = []
    cuts = model.cut_range(n)
    m = model.max_packet

    def walk(halves, idx, side, deck, p):
        top, bottom = halves
        left = (len(top) - idx[0], len(bottom) - idx[1])
        if left[0] == 0 or left[1] == 0:
            paths.tick()
            out.append((deck + top[idx[0]:] + bottom[idx[1]:], p))
            return
        src = halves[side]
        options = min(m, left[side])
        q = p / options
        for size in range(1, options + 1):
            nidx = list(idx)
            nidx[side] += size
            walk(halves, nidx, 1 - side, deck + src[idx[side]:idx[side] + size], q)

    for c in cuts:
        halves = (list(range(1, c + 1)), list(range(c + 1, n + 1)))
        for start in (0, 1):
            walk(halves, [0, 0], start, [], Fraction(1, 2 * len(cuts)))
    return out


def _top_paths(n: int, paths: _PathCounter):
    out = []
    for j in range(n):
        paths.tick()
        deck = list(range(2, n + 1))
        deck.insert(j, 1)
        out.append((deck, Fraction(1, n)))
    return out


def _fisher_yates_paths(n: int, paths: _PathCounter):
    out = []

    def walk(deck, i, p):
        if i == 0:
            paths.tick()
            out.append((list(deck), p))
            return
        for j in range(i + 1):
            deck[i], deck[j] = deck[j], deck[i]
            walk(deck, i - 1, p / (i + 1))
            deck[i], deck[j] = deck[j], deck[i]

    walk(list(range(1, n + 1)), n - 1, Fraction(1))
    return out


def deterministic_permutation(model: ShuffleModel, n: int) -> Arrangement:
    """Arrangement produced from the sorted deck by a deterministic shuffle."""
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    if isinstance(model, (FaroOut, FaroIn)):
        if n % 2:
            raise ValueError(f"Faro shuffles need an even deck, got n={n}")
        half = n // 2
        first, second = range(1, half + 1), range(half + 1, n + 1)
        if isinstance(model, FaroIn):
            first, second = second, first
        return Arrangement._trusted(x for pair in zip(first, second) for x in pair)
    if isinstance(model, Mongean):
        pile = [1]
        for card in range(2, n + 1):
            if card % 2 == 0:
                pile.insert(0, card)
            else:
                pile.append(card)
        return Arrangement._trusted(pile)
    raise ValueError(f"{model.name} is stochastic; it has no single permutation")


def deterministic_period(model: ShuffleModel, n: int) -> int:
    """Order of the shuffle: lcm of the cycle lengths of its permutation."""
    perm = deterministic_permutation(model, n)
    seen = [False] * (n + 1)
    period = 1
    for start in range(1, n + 1):
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = perm[x - 1]
            length += 1
        if length:
            period = lcm(period, length)
    return period


def faro_trace(n: int, start: int, hands: int, variant: ShuffleModel = FaroOut(), origin: int = 0) -> list[int]:
    """Positions visited by one card over ``hands`` perfect shuffles.

    Positions are numbered from ``origin``: with the default 0 a position is
    the number of cards above the card, so an out-shuffle of 52 cards sends
    position x to 2x mod 51 and leaves 0 and 51 fixed. ``origin=1`` gives
    1-based positions as used by arrangements.
    """
    if not isinstance(variant, (FaroOut, FaroIn)):
        raise ValueError("faro_trace needs a Faro variant")
    perm = deterministic_permutation(variant, n)
    if not origin <= start < n + origin:
        raise ValueError(f"start position {start} outside {origin}..{n - 1 + origin}")
    if hands < 0:
        raise ValueError("hands must be >= 0")
    # A card at 1-based position q moves to the position that now holds label q.
    dest = inverse(perm)
    pos = start - origin + 1
    trace = [start]
    for _ in range(hands):
        pos = dest[pos - 1]
        trace.append(pos - 1 + origin)
    return trace
