"""Exact shuffle Markov chains on S_n.

Matrices hold integer numerators over one shared denominator so that
products stay in arbitrary-precision integers; numpy ``object`` arrays
carry the Python ints through ``@``. Entries come back out as
:class:`fractions.Fraction`. Distributions are row vectors: one hand maps
``d`` to ``d @ M``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Iterator, Sequence

import numpy as np

from .models import (
    PhysicalRiffle,
    ShuffleModel,
    StepDistribution,
    brute_force_distribution,
    single_shuffle_distribution,
)
from .permcore import check_cap, enumerate_arrangements, rank

__all__ = [
    "Distribution",
    "TransitionMatrix",
    "DistanceCurve",
    "step_law",
    "transition_matrix",
    "matrix_power",
    "evolve",
    "tv_distance",
    "distance_curve_exact",
]

METHODS = ("exact", "closed-form", "bound", "empirical")


@dataclass(frozen=True)
class Distribution:
    """Dense exact probability vector over all n! arrangements, by rank."""

    n: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != factorial(self.n):
            raise ValueError(f"expected {factorial(self.n)} entries for n={self.n}, got {len(self.entries)}")
        if any(x < 0 for x in self.entries):
            raise ValueError("negative probability")
        if sum(self.entries, Fraction(0)) != 1:
            raise ValueError("distribution does not sum to 1")

    @classmethod
    def point_mass(cls, n: int, arrangement: Sequence[int] | None = None) -> "Distribution":
        r = 0 if arrangement is None else rank(arrangement)
        entries = [Fraction(0)] * factorial(n)
        entries[r] = Fraction(1)
        return cls(n, tuple(entries))

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        u = Fraction(1, factorial(n))
        return cls(n, (u,) * factorial(n))

    @classmethod
    def from_step(cls, step: StepDistribution) -> "Distribution":
        entries = [Fraction(0)] * factorial(step.n)
        for r, p in step.probs.items():
            entries[r] = p
        return cls(step.n, tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, r: int) -> Fraction:
        return self.entries[r]


class TransitionMatrix:
    """Row-stochastic n! x n! matrix; rows are source ranks, columns targets."""

    __slots__ = ("n", "numerators", "denominator")

    def __init__(self, n: int, numerators: np.ndarray, denominator: int):
        size = factorial(n)
        if numerators.shape != (size, size):
            raise ValueError(f"matrix shape {numerators.shape} does not match n={n}")
        numerators = numerators.copy()
        numerators.flags.writeable = False
        self.n = n
        self.numerators = numerators
        self.denominator = int(denominator)

    @classmethod
    def identity(cls, n: int) -> "TransitionMatrix":
        size = factorial(n)
        a = np.zeros((size, size), dtype=object)
        for i in range(size):
            a[i, i] = 1
        return cls(n, a, 1)

    @property
    def size(self) -> int:
        return self.numerators.shape[0]

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(int(self.numerators[i, j]), self.denominator)

    def row(self, i: int) -> tuple:
        d = self.denominator
        return tuple(Fraction(int(x), d) for x in self.numerators[i])

    def rows(self) -> Iterator[tuple]:
        for i in range(self.size):
            yield self.row(i)

    def row_sums(self) -> list[Fraction]:
        return [Fraction(int(s), self.denominator) for s in self.numerators.sum(axis=1)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TransitionMatrix) or other.n != self.n:
            return NotImplemented
        # Compare a/b with c/d as a*d == c*b.
        return bool(np.all(self.numerators * other.denominator == other.numerators * self.denominator))

    __hash__ = None

    def __repr__(self) -> str:
        return f"TransitionMatrix(n={self.n}, denominator={self.denominator})"


def step_law(model: ShuffleModel, n: int, max_n: int | None = None) -> StepDistribution:
    """One-hand law for any model: closed form when known, else enumeration."""
    if isinstance(model, PhysicalRiffle) or not model.stochastic:
        check_cap(n, max_n)
        return brute_force_distribution(model, n)
    return single_shuffle_distribution(model, n, max_n)


def transition_matrix(model: ShuffleModel, n: int, max_n: int | None = None) -> TransitionMatrix:
    """Random-walk matrix: row sigma puts mass Q(p) on column sigma o p."""
    check_cap(n, max_n)
    step = step_law(model, n, max_n)
    decks = enumerate_arrangements(n, max_n)
    index = {d: i for i, d in enumerate(decks)}
    denom = lcm(*(p.denominator for p in step.probs.values()))
    moves = [(decks[r], int(p * denom)) for r, p in step.probs.items()]
    size = len(decks)
    a = np.zeros((size, size), dtype=object)
    for i, sigma in enumerate(decks):
        for p, w in moves:
            a[i, index[tuple(sigma[x - 1] for x in p)]] += w
    return TransitionMatrix(n, a, denom)


def matrix_power(m: TransitionMatrix, k: int) -> TransitionMatrix:
    """Exact ``m ** k`` by repeated squaring."""
    if k < 0:
        raise ValueError("power must be >= 0")
    result = None
    base_num, base_den = m.numerators, m.denominator
    while k:
        if k & 1:
            if result is None:
                result = (base_num, base_den)
            else:
                result = (result[0] @ base_num, result[1] * base_den)
        k >>= 1
        if k:
            base_num, base_den = base_num @ base_num, base_den * base_den
    if result is None:
        return TransitionMatrix.identity(m.n)
    return TransitionMatrix(m.n, result[0], result[1])


def _as_integer_vector(d: Distribution) -> tuple[np.ndarray, int]:
    denom = lcm(*(x.denominator for x in d.entries))
    return np.array([int(x * denom) for x in d.entries], dtype=object), denom


def evolve(d: Distribution, m: TransitionMatrix, k: int) -> Distribution:
    """Distribution after ``k`` hands: ``d @ m**k``."""
    if d.n != m.n:
        raise ValueError(f"dimension mismatch: distribution n={d.n}, matrix n={m.n}")
    if k < 0:
        raise ValueError("hands must be >= 0")
    v, denom = _as_integer_vector(d)
    for _ in range(k):
        v = v @ m.numerators
        denom *= m.denominator
    return Distribution(d.n, tuple(Fraction(int(x), denom) for x in v))


def tv_distance(p: Distribution, q: Distribution) -> Fraction:
    """Total variation distance, half the L1 distance."""
    if p.n != q.n:
        raise ValueError(f"dimension mismatch: n={p.n} vs n={q.n}")
    return sum((abs(a - b) for a, b in zip(p.entries, q.entries)), Fraction(0)) / 2


@dataclass(frozen=True)
class DistanceCurve:
    """Distance to uniform after k hands, tagged with how it was obtained."""

    n: int
    model: str
    method: str
    points: tuple

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        ks = [k for k, _ in self.points]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError("k values must be strictly increasing")
        if any(not 0 <= d <= 1 for _, d in self.points):
            raise ValueError("distance values must lie in [0, 1]")

    @property
    def ks(self) -> list[int]:
        return [k for k, _ in self.points]

    @property
    def values(self) -> list:
        return [d for _, d in self.points]

    def at(self, k: int):
        for kk, d in self.points:
            if kk == k:
                return d
        raise KeyError(k)

    def __len__(self) -> int:
        return len(self.points)


def distance_curve_exact(
    model: ShuffleModel, n: int, k_max: int, max_n: int | None = None
) -> DistanceCurve:
    """d(k) = ||law after k hands from the sorted deck - uniform|| for k = 0..k_max."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    m = transition_matrix(model, n, max_n)
    nfact = factorial(n)
    v, denom = _as_integer_vector(Distribution.point_mass(n))
    points = []
    for k in range(k_max + 1):
        if k:
            v = v @ m.numerators
            denom *= m.denominator
        # sum |v/denom - 1/n!| / 2 with one integer division at the end
        gap = sum(abs(int(x) * nfact - denom) for x in v)
        points.append((k, Fraction(gap, 2 * denom * nfact)))
    return DistanceCurve(n, _describe(model), "exact", tuple(points))


def _describe(model: ShuffleModel) -> str:
    params = getattr(model, "__dataclass_fields__", {})
    if not params:
        return model.name
    inner = ",".join(f"{k}={getattr(model, k)}" for k in params)
    return f"{model.name}({inner})"
