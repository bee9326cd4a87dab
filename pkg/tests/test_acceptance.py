"""Acceptance gate: one test per criterion, each at its stated tolerance.

The conftest prints a PASS/FAIL line per criterion after the run. Criteria
with several parts check every part and report all failing ones together.
"""

import time
from fractions import Fraction

from math import factorial

import pytest

from deckmix.closed_form import coupling_bound, riffle_distance_closed_form
from deckmix.markov import Distribution, distance_curve_exact, evolve, transition_matrix, tv_distance
from deckmix.models import (
    FaroIn,
    FaroOut,
    GsrRiffle,
    Mongean,
    NaiveUniform,
    PhysicalRiffle,
    TopInAtRandom,
    brute_force_distribution,
    deterministic_period,
    faro_trace,
    single_shuffle_distribution,
)
from deckmix.montecarlo import SimulationConfig, empirical_tv, run_trials, sampling_tolerance
from deckmix.permcore import enumerate_arrangements

from oracles import distance_curve, riffle_law, top_law

F = Fraction
STOCHASTIC = [TopInAtRandom(), GsrRiffle(2), NaiveUniform(), PhysicalRiffle()]


class Parts:
    """Collects failed sub-checks so one criterion reports all of them."""

    def __init__(self):
        self.failed = []

    def check(self, ok, label):
        if not ok:
            self.failed.append(label)

    def done(self):
        assert not self.failed, "; ".join(self.failed)


@pytest.mark.criterion(1, "top-card n=3 exact distances")
def test_criterion_1_top_card_n3():
    t0 = time.perf_counter()
    parts = Parts()
    curve = distance_curve_exact(TopInAtRandom(), 3, 3)
    oracle = distance_curve(top_law(3), 3, 3)
    parts.check(curve.at(1) == F(5, 6), f"d(1) = {curve.at(1)}, expected 5/6")
    parts.check(curve.at(2) == F(1, 6) == oracle[2], f"d(2) = {curve.at(2)}, oracle {oracle[2]}")
    parts.check(curve.at(3) == F(1, 18) == oracle[3], f"d(3) = {curve.at(3)}, oracle {oracle[3]}")
    parts.check(time.perf_counter() - t0 < 1, "runtime >= 1 s")
    parts.done()


@pytest.mark.criterion(2, "riffle n=4 distance and one-step matrix")
def test_criterion_2_riffle_n4():
    t0 = time.perf_counter()
    parts = Parts()
    parts.check(distance_curve_exact(GsrRiffle(2), 4, 1).at(1) == F(1, 2), "d(1) != 1/2")
    m = transition_matrix(GsrRiffle(2), 4)
    parts.check(all(m[i, i] == F(5, 16) for i in range(24)), "diagonal != 5/16")
    row = m.row(0)
    parts.check(row.count(F(1, 16)) == 11, f"{row.count(F(1, 16))} entries of 1/16")
    parts.check(row.count(0) == 12 and sum(row) == 1, "row mass not 5/16 + 11/16")
    parts.check(time.perf_counter() - t0 < 1, "runtime >= 1 s")
    parts.done()


@pytest.mark.criterion(3, "exact chain equals closed form, n=3..5, k=1..10")
def test_criterion_3_oracle_equivalence():
    parts = Parts()
    for n in (3, 4, 5):
        t0 = time.perf_counter()
        exact = distance_curve_exact(GsrRiffle(2), n, 10)
        closed = riffle_distance_closed_form(n, 10)
        for k in range(1, 11):
            parts.check(exact.at(k) == closed.at(k), f"n={n} k={k}: {exact.at(k)} != {closed.at(k)}")
        if n == 5:
            parts.check(time.perf_counter() - t0 < 30, "n=5 runtime >= 30 s")
    parts.done()


@pytest.mark.criterion(4, "GSR step law equals exhaustive enumeration, n <= 6")
def test_criterion_4_brute_force():
    parts = Parts()
    for n in range(1, 7):
        closed = single_shuffle_distribution(GsrRiffle(2), n)
        parts.check(closed == brute_force_distribution(GsrRiffle(2), n), f"n={n} cut/word enumeration differs")
        law = {tuple(a): p for a, p in closed.by_arrangement().items()}
        parts.check(law == riffle_law(n), f"n={n} binary-word oracle differs")
    parts.done()


@pytest.mark.criterion(5, "perfect-shuffle periods and the mod-51 trace")
def test_criterion_5_faro():
    t0 = time.perf_counter()
    parts = Parts()
    parts.check(deterministic_period(FaroOut(), 52) == 8, "out-shuffle period")
    parts.check(deterministic_period(FaroIn(), 52) == 52, "in-shuffle period")
    parts.check(deterministic_period(Mongean(), 52) == 12, "Mongean period")
    trace = faro_trace(52, 7, 8)
    parts.check(trace == [7, 14, 28, 5, 10, 20, 40, 29, 7], f"trace {trace}")
    parts.check(time.perf_counter() - t0 < 0.1, "runtime >= 0.1 s")
    parts.done()


@pytest.mark.criterion(6, "coupling bound at n=52")
def test_criterion_6_coupling_bound():
    parts = Parts()
    first = next(k for k in range(64) if coupling_bound(52, k) <= F(1, 2))
    parts.check(first == 12, f"smallest k with bound <= 0.5 is {first}, expected 12")
    parts.check(all(coupling_bound(52, k) == 1 for k in range(64) if 2**k <= 51), "no clamp for 2^k <= 51")
    parts.check(coupling_bound(52, 6) < 1, "clamped past 2^k > 51")
    closed = riffle_distance_closed_form(52, 20)
    parts.check(all(coupling_bound(52, k) >= closed.at(k) for k in range(21)), "bound below distance")
    parts.done()


@pytest.mark.criterion(7, "cutoff shape at n=52")
def test_criterion_7_cutoff_n52():
    t0 = time.perf_counter()
    parts = Parts()
    curve = riffle_distance_closed_form(52, 20)
    parts.check(all(curve.at(k) > F(9, 10) for k in range(5)), "d(k) <= 0.9 for some k <= 4")
    first = next(k for k in curve.ks if curve.at(k) < F(1, 2))
    parts.check(first == 7, f"first crossing of 0.5 at k={first}")
    parts.check(abs(float(curve.at(7)) - 0.334) <= 0.001, f"d(7) = {float(curve.at(7)):.6f}")
    parts.check(all(curve.at(k) < F(1, 20) for k in range(10, 21)), "d(k) >= 0.05 for some k >= 10")
    parts.check(time.perf_counter() - t0 < 5, "runtime >= 5 s")
    parts.done()


@pytest.mark.criterion(8, "top-card versus riffle crossover")
def test_criterion_8_crossover():
    parts = Parts()
    top3 = distance_curve_exact(TopInAtRandom(), 3, 10)
    rif3 = distance_curve_exact(GsrRiffle(2), 3, 10)
    parts.check(top3.at(1) > rif3.at(1), "n=3: top not behind after one hand")
    parts.check(any(top3.at(k) < rif3.at(k) for k in range(5)), "n=3: no overtaking by k=4")
    top4 = distance_curve_exact(TopInAtRandom(), 4, 10)
    rif4 = distance_curve_exact(GsrRiffle(2), 4, 10)
    parts.check(all(top4.at(k) >= rif4.at(k) for k in range(11)), "n=4: top ahead at some k")
    parts.done()


@pytest.mark.criterion(9, "monotone mixing, d(20) < 1e-3, exact stationarity")
def test_criterion_9_mixing_properties():
    parts = Parts()
    for model in STOCHASTIC:
        for n in range(1, 6):
            values = distance_curve_exact(model, n, 20).values
            label = f"{model.name} n={n}"
            parts.check(all(b <= a for a, b in zip(values, values[1:])), f"{label} not monotone")
            parts.check(values[20] < F(1, 1000), f"{label} d(20) = {float(values[20]):.2e}")
            m = transition_matrix(model, n)
            u = Distribution.uniform(n)
            parts.check(evolve(u, m, 1) == u, f"{label} uniform not stationary")
    parts.done()


@pytest.mark.criterion(10, "Monte-Carlo statistical suite")
def test_criterion_10_monte_carlo():
    t0 = time.perf_counter()
    parts = Parts()
    trials = 10**6

    def exact(model, n):
        return Distribution.from_step(brute_force_distribution(model, n))

    for model, n in ((TopInAtRandom(), 3), (NaiveUniform(), 4)):
        emp = run_trials(SimulationConfig(model, n, 1, trials, seed=1))
        tv, tol = empirical_tv(emp, exact(model, n)), sampling_tolerance(n, trials)
        parts.check(tv <= tol, f"{model.name} n={n}: TV {tv:.4g} > {tol:.4g}")

    n = 4
    cfg = SimulationConfig(PhysicalRiffle(), n, 1, trials, seed=1)
    emp = run_trials(cfg)
    tol = sampling_tolerance(n, trials)
    physical, gsr = exact(PhysicalRiffle(), n), exact(GsrRiffle(2), n)
    gap = tv_distance(physical, gsr)
    tv_self, tv_gsr = empirical_tv(emp, physical), empirical_tv(emp, gsr)
    parts.check(tv_self <= tol, f"physical vs enumeration TV {tv_self:.4g} > {tol:.4g}")
    parts.check(abs(tv_gsr - float(gap)) <= tol, f"physical vs GSR TV {tv_gsr:.4g}, enumeration gap {float(gap):.4g}")
    parts.check(gap > 0, "physical law equals GSR")

    parts.check(run_trials(cfg).counts == emp.counts, "rerun not bit-identical")
    parts.check(run_trials(cfg, workers=4).counts == emp.counts, "4-worker run not bit-identical")
    parts.check(len(enumerate_arrangements(n)) == factorial(n), "arrangement enumeration")
    parts.check(time.perf_counter() - t0 < 60, "runtime >= 60 s")
    parts.done()
