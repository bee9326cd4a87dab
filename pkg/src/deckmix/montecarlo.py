"""Seeded Monte-Carlo simulation of shuffles.

The trial loop runs in the compiled ``_kernels`` extension when it is
importable and falls back to ``_kernels_py`` otherwise (or when the
environment variable ``DECKMIX_PURE_PYTHON`` is set). Both backends share
one RNG construction, so counts are identical whichever one runs and
however the trials are split across workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels_py
from .markov import Distribution, tv_distance
from .models import (
    FaroIn,
    FaroOut,
    GsrRiffle,
    Mongean,
    NaiveUniform,
    PhysicalRiffle,
    ShuffleModel,
    TopInAtRandom,
    brute_force_distribution,
    deterministic_permutation,
    single_shuffle_distribution,
)
from .permcore import Arrangement, DeckSizeError, identity

if os.environ.get("DECKMIX_PURE_PYTHON"):
    _kernels = _kernels_py
else:
    try:
        from . import _kernels
    except ImportError:
        _kernels = _kernels_py

BACKEND = "python" if _kernels is _kernels_py else "compiled"

SplitMix64 = _kernels_py.SplitMix64

# rank-indexed histograms hold n! cells
MC_MAX_N = 8

__all__ = [
    "BACKEND",
    "MC_MAX_N",
    "SplitMix64",
    "SimulationConfig",
    "EmpiricalDistribution",
    "PhysicalVsGsrReport",
    "shuffle_once",
    "simulate_hands",
    "run_trials",
    "empirical_tv",
    "sampling_tolerance",
    "compare_physical_vs_gsr",
]


@dataclass(frozen=True)
class SimulationConfig:
    model: ShuffleModel
    n: int
    hands: int
    trials: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"invalid deck size {self.n}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.hands < 0:
            raise ValueError("hands must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Observed rank counts from ``trials`` simulated decks."""

    n: int
    counts: dict = field(hash=False)
    trials: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.trials:
            raise ValueError("counts do not add up to trials")

    def frequency(self, r: int) -> Fraction:
        return Fraction(self.counts.get(r, 0), self.trials)

    def as_distribution(self) -> Distribution:
        entries = [Fraction(0)] * math.factorial(self.n)
        for r, c in self.counts.items():
            entries[r] = Fraction(c, self.trials)
        return Distribution(self.n, tuple(entries))


def _kernel_args(model: ShuffleModel, n: int):
    if isinstance(model, TopInAtRandom):
        return _kernels_py.KIND_TOP, 0, 0, None
    if isinstance(model, GsrRiffle):
        return _kernels_py.KIND_GSR, model.a, 0, None
    if isinstance(model, PhysicalRiffle):
        return _kernels_py.KIND_PHYSICAL, model.cut_spread, model.max_packet, None
    if isinstance(model, NaiveUniform):
        return _kernels_py.KIND_NAIVE, 0, 0, None
    if isinstance(model, (FaroOut, FaroIn, Mongean)):
        return _kernels_py.KIND_PERM, 0, 0, list(deterministic_permutation(model, n))
    raise TypeError(f"unsupported model {model!r}")


def shuffle_once(deck, model: ShuffleModel, rng: SplitMix64) -> Arrangement:
    """Apply one hand of ``model`` to ``deck``; deterministic models ignore ``rng``."""
    deck = Arrangement(deck)
    kind, p1, p2, perm = _kernel_args(model, len(deck))
    out = _kernels_py.apply_step(kind, [x - 1 for x in deck], rng, p1, p2, perm)
    return Arrangement._trusted(x + 1 for x in out)


def simulate_hands(model: ShuffleModel, n: int, hands: int, seed: int = 0) -> list[Arrangement]:
    """Deck after each of ``hands`` hands, starting from the sorted deck.

    Uses the stream of trial 0 for ``seed``, the same draws ``run_trials``
    spends on its first deck.
    """
    rng = SplitMix64(seed, 0)
    deck = identity(n)
    out = []
    for _ in range(hands):
        deck = shuffle_once(deck, model, rng)
        out.append(deck)
    return out


def run_trials(cfg: SimulationConfig, workers: int = 1) -> EmpiricalDistribution:
    """Histogram of final arrangements over independent trials.

    Trials are split into ``workers`` contiguous blocks run on threads (the
    compiled kernel releases the GIL); the merged counts do not depend on
    ``workers``.
    """
    if cfg.n > MC_MAX_N:
        raise DeckSizeError(f"n={cfg.n} too large for rank-indexed counting (n <= {MC_MAX_N})")
    kind, p1, p2, perm = _kernel_args(cfg.model, cfg.n)
    workers = max(1, min(workers, cfg.trials))
    bounds = np.linspace(0, cfg.trials, workers + 1).astype(np.int64)

    def block(i):
        return _kernels.run_counts(kind, cfg.n, cfg.hands, cfg.seed, int(bounds[i]), int(bounds[i + 1]), p1, p2, perm)

    if workers == 1:
        total = block(0)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            total = sum(pool.map(block, range(workers)))
    counts = {int(r): int(c) for r, c in enumerate(total) if c}
    return EmpiricalDistribution(cfg.n, counts, cfg.trials)


def empirical_tv(e: EmpiricalDistribution, q: Distribution) -> float:
    """Half the L1 gap between observed frequencies and ``q``."""
    if e.n != q.n:
        raise ValueError(f"dimension mismatch: n={e.n} vs n={q.n}")
    return float(tv_distance(e.as_distribution(), q))


def sampling_tolerance(n: int, trials: int) -> float:
    """Three-sigma TV allowance for a multinomial sample over n! cells."""
    return 3 * math.sqrt(math.factorial(n) / trials) / 2


@dataclass(frozen=True)
class PhysicalVsGsrReport:
    n: int
    trials: int
    seed: int
    model: PhysicalRiffle
    empirical_vs_gsr: float
    exact_vs_gsr: Fraction | None
    empirical_vs_exact: float | None


def compare_physical_vs_gsr(
    n: int, trials: int, seed: int = 0, model: PhysicalRiffle = PhysicalRiffle()
) -> PhysicalVsGsrReport:
    """How far one hand of the physical riffle is from one GSR riffle."""
    if n > 6:
        raise DeckSizeError(f"n={n} exceeds the comparison limit n <= 6")
    gsr = Distribution.from_step(single_shuffle_distribution(GsrRiffle(2), n))
    emp = run_trials(SimulationConfig(model, n, 1, trials, seed))
    try:
        exact = Distribution.from_step(brute_force_distribution(model, n))
    except DeckSizeError:
        exact = None
    return PhysicalVsGsrReport(
        n=n,
        trials=trials,
        seed=seed,
        model=model,
        empirical_vs_gsr=empirical_tv(emp, gsr),
        exact_vs_gsr=None if exact is None else tv_distance(exact, gsr),
        empirical_vs_exact=None if exact is None else empirical_tv(emp, exact),
    )
