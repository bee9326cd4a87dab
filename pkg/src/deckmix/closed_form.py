"""Riffle-shuffle analytics that never touch n!-sized state.

Everything is evaluated in exact rationals; near the cutoff the terms
``C(2^k + n - r, n) / 2^(kn)`` and ``1/n!`` agree to many digits, so float
evaluation would cancel catastrophically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .markov import DistanceCurve

__all__ = [
    "EulerianTable",
    "BoundParams",
    "eulerian",
    "riffle_k_probability",
    "riffle_distance_closed_form",
    "coupling_bound",
    "coupling_bound_curve",
    "cutoff_estimate",
    "cutoff_detect",
]


@dataclass(frozen=True)
class EulerianTable:
    """``counts[r - 1]`` arrangements of n cards have exactly r rising sequences."""

    n: int
    counts: tuple

    def __getitem__(self, r: int) -> int:
        if not 1 <= r <= self.n:
            raise IndexError(f"r={r} outside 1..{self.n}")
        return self.counts[r - 1]

    def __iter__(self):
        return iter(self.counts)

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class BoundParams:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"invalid deck size {self.n}")
        if self.k < 0:
            raise ValueError(f"invalid hand count {self.k}")


@lru_cache(maxsize=None)
def _eulerian_row(n: int) -> tuple:
    row = [1]
    for m in range(2, n + 1):
        prev = row
        row = [
            r * (prev[r - 1] if r <= m - 1 else 0) + (m - r + 1) * (prev[r - 2] if r >= 2 else 0)
            for r in range(1, m + 1)
        ]
    return tuple(row)


def eulerian(n: int) -> EulerianTable:
    """A(n, r) from A(n, r) = r A(n-1, r) + (n-r+1) A(n-1, r-1), A(1, 1) = 1."""
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    return EulerianTable(n, _eulerian_row(n))


def riffle_k_probability(n: int, k: int, r: int) -> Fraction:
    """Chance that k GSR riffles of a sorted deck give a particular
    arrangement with r rising sequences: C(2^k + n - r, n) / 2^(kn)."""
    if not 1 <= r <= n:
        raise ValueError(f"r={r} outside 1..{n}")
    if k < 0:
        raise ValueError("k must be >= 0")
    a = 1 << k
    return Fraction(math.comb(a + n - r, n), a**n)


def riffle_distance_closed_form(n: int, k_max: int) -> DistanceCurve:
    """GSR riffle distance to uniform for k = 0..k_max via Eulerian weights."""
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    table = eulerian(n)
    nfact = math.factorial(n)
    points = []
    for k in range(k_max + 1):
        a = 1 << k
        denom = a**n
        # |C/denom - 1/n!| = |C n! - denom| / (denom n!)
        gap = sum(
            count * abs(math.comb(a + n - r, n) * nfact - denom) for r, count in enumerate(table.counts, start=1)
        )
        points.append((k, Fraction(gap, 2 * denom * nfact)))
    return DistanceCurve(n, "gsr(a=2)", "closed-form", tuple(points))


def coupling_bound(p: BoundParams | int, k: int | None = None) -> Fraction:
    """Strong-stationary-time bound 1 - prod_{j<n} (1 - j / 2^k).

    Clamped to 1 once some factor is <= 0, i.e. when 2^k <= n - 1.
    Accepts ``coupling_bound(BoundParams(n, k))`` or ``coupling_bound(n, k)``.
    """
    if not isinstance(p, BoundParams):
        p = BoundParams(p, k)
    n, k = p.n, p.k
    a = 1 << k
    if a <= n - 1:
        return Fraction(1)
    num = 1
    for j in range(1, n):
        num *= a - j
    return 1 - Fraction(num, a ** (n - 1))


def coupling_bound_curve(n: int, k_max: int) -> DistanceCurve:
    points = tuple((k, coupling_bound(n, k)) for k in range(k_max + 1))
    return DistanceCurve(n, "gsr(a=2)", "bound", points)


def cutoff_estimate(kind: str, n: int) -> float:
    """Rule-of-thumb mixing time: 1.5 log2 n for riffles, n log2 n for top-card."""
    if n < 1:
        raise ValueError(f"invalid deck size {n}")
    if kind in ("riffle", "gsr"):
        return 1.5 * math.log2(n)
    if kind == "top":
        return n * math.log2(n)
    raise ValueError(f"no cutoff estimate for model kind {kind!r}")


def cutoff_detect(curve: DistanceCurve, threshold=Fraction(1, 2)) -> int | None:
    """First k with d(k) <= threshold, or None if the curve never gets there."""
    if not 0 < threshold < 1:
        raise ValueError(f"threshold {threshold} outside (0, 1)")
    if not curve.points:
        raise ValueError("empty curve")
    for k, d in curve.points:
        if d <= threshold:
            return k
    return None
