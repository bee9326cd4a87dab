"""Deck arrangements as permutations of 1..n.

An arrangement lists the card label found at each position, top of the
deck first. Positions and labels are both 1-based. Arrangements are
indexed by their lexicographic rank (0 for the sorted deck, n!-1 for the
reversed one) via the Lehmer code.
"""

from __future__ import annotations

from math import factorial
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Arrangement",
    "DeckSizeError",
    "DEFAULT_MAX_N",
    "HARD_MAX_N",
    "check_cap",
    "identity",
    "rank",
    "unrank",
    "compose",
    "inverse",
    "rising_sequences",
    "enumerate_arrangements",
    "format_arrangement",
    "parse_arrangement",
]

# n! rows/columns for dense exact matrices; 720 at n=6, 5040 at n=7.
DEFAULT_MAX_N = 6
HARD_MAX_N = 7


class DeckSizeError(ValueError):
    """A requested deck size exceeds a resource cap."""


class Arrangement(tuple):
    """Immutable deck ordering; ``a[i]`` is the label at position ``i + 1``."""

    __slots__ = ()

    def __new__(cls, labels: Iterable[int]) -> "Arrangement":
        labels = tuple(int(x) for x in labels)
        n = len(labels)
        if n < 1:
            raise ValueError("deck size must be at least 1")
        if sorted(labels) != list(range(1, n + 1)):
            raise ValueError(f"{labels!r} is not a permutation of 1..{n}")
        return super().__new__(cls, labels)

    @classmethod
    def _trusted(cls, labels: Iterable[int]) -> "Arrangement":
        # Skips validation; callers guarantee a bijection.
        return super().__new__(cls, labels)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(self)

    def position(self, label: int) -> int:
        """1-based position of ``label`` in the deck."""
        return self.index(label) + 1

    def __repr__(self) -> str:
        return f"Arrangement({format_arrangement(self)})"


def check_cap(n: int, max_n: int | None = None) -> None:
    """Reject deck sizes above the enumeration cap.

    ``max_n`` raises the default cap of 6 but never beyond 7.
    """
    cap = DEFAULT_MAX_N if max_n is None else max_n
    if cap > HARD_MAX_N:
        raise DeckSizeError(f"cap override {cap} exceeds hard limit n <= {HARD_MAX_N}")
    if n > cap:
        raise DeckSizeError(
            f"n={n} exceeds the exact-enumeration limit n <= {cap} "
            f"(override up to {HARD_MAX_N} with max_n)"
        )


def identity(n: int) -> Arrangement:
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    return Arrangement._trusted(range(1, n + 1))


def rank(a: Sequence[int]) -> int:
    """Lexicographic index of ``a`` among all orderings of its labels."""
    n = len(a)
    r = 0
    for i in range(n):
        smaller = 0
        ai = a[i]
        for j in range(i + 1, n):
            if a[j] < ai:
                smaller += 1
        r += smaller * factorial(n - 1 - i)
    return r


def unrank(n: int, r: int) -> Arrangement:
    """Inverse of :func:`rank`, decoding ``r`` in the factorial number system."""
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    if not 0 <= r < factorial(n):
        raise ValueError(f"rank {r} out of range 0..{factorial(n) - 1}")
    pool = list(range(1, n + 1))
    out = []
    for i in range(n - 1, -1, -1):
        digit, r = divmod(r, factorial(i))
        out.append(pool.pop(digit))
    return Arrangement._trusted(out)


def compose(f: Sequence[int], g: Sequence[int]) -> Arrangement:
    """``result(i) = f(g(i))``, reading arrangements as position -> label maps.

    If ``f`` is a deck and ``g`` is the arrangement a shuffle produces from
    the sorted deck, ``compose(f, g)`` is the deck after shuffling ``f``.
    """
    if len(f) != len(g):
        raise ValueError(f"size mismatch: {len(f)} vs {len(g)}")
    return Arrangement._trusted(f[x - 1] for x in g)


def inverse(a: Sequence[int]) -> Arrangement:
    out = [0] * len(a)
    for pos, label in enumerate(a, start=1):
        out[label - 1] = pos
    return Arrangement._trusted(out)


def rising_sequences(a: Sequence[int]) -> int:
    """Number of maximal runs v, v+1, ..., w of labels lying in increasing positions."""
    pos = [0] * (len(a) + 1)
    for i, label in enumerate(a):
        pos[label] = i
    return 1 + sum(1 for v in range(1, len(a)) if pos[v + 1] < pos[v])


def enumerate_arrangements(n: int, max_n: int | None = None) -> list[Arrangement]:
    """All n! arrangements in lexicographic order (index == rank)."""
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    check_cap(n, max_n)
    return list(_lex_permutations(n))


def _lex_permutations(n: int) -> Iterator[Arrangement]:
    # Narayana's next-permutation walk, already in lexicographic order.
    p = list(range(1, n + 1))
    while True:
        yield Arrangement._trusted(p)
        i = n - 2
        while i >= 0 and p[i] > p[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while p[j] < p[i]:
            j -= 1
        p[i], p[j] = p[j], p[i]
        p[i + 1 :] = reversed(p[i + 1 :])


def format_arrangement(a: Sequence[int]) -> str:
    """Digit string for n <= 9 (``"213"``), comma-separated labels above."""
    if len(a) <= 9:
        return "".join(str(x) for x in a)
    return ",".join(str(x) for x in a)


def parse_arrangement(text: str) -> Arrangement:
    text = text.strip()
    if "," in text:
        return Arrangement(int(x) for x in text.split(","))
    return Arrangement(int(ch) for ch in text)
