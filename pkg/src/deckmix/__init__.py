"""How well is a deck shuffled? Exact chains, closed forms and simulation."""

from .closed_form import (
    coupling_bound,
    coupling_bound_curve,
    cutoff_detect,
    cutoff_estimate,
    eulerian,
    riffle_distance_closed_form,
    riffle_k_probability,
)
from .markov import (
    DistanceCurve,
    Distribution,
    TransitionMatrix,
    distance_curve_exact,
    evolve,
    matrix_power,
    transition_matrix,
    tv_distance,
)
from .models import (
    FaroIn,
    FaroOut,
    GsrRiffle,
    Mongean,
    NaiveUniform,
    PhysicalRiffle,
    TopInAtRandom,
    brute_force_distribution,
    deterministic_period,
    deterministic_permutation,
    faro_trace,
    single_shuffle_distribution,
)
from .permcore import (
    Arrangement,
    DeckSizeError,
    compose,
    enumerate_arrangements,
    identity,
    inverse,
    rank,
    rising_sequences,
    unrank,
)

__version__ = "0.1.0"

__all__ = [
    "coupling_bound",
    "coupling_bound_curve",
    "cutoff_detect",
    "cutoff_estimate",
    "eulerian",
    "riffle_distance_closed_form",
    "riffle_k_probability",
    "DistanceCurve",
    "Distribution",
    "TransitionMatrix",
    "distance_curve_exact",
    "evolve",
    "matrix_power",
    "transition_matrix",
    "tv_distance",
    "FaroIn",
    "FaroOut",
    "GsrRiffle",
    "Mongean",
    "NaiveUniform",
    "PhysicalRiffle",
    "TopInAtRandom",
    "brute_force_distribution",
    "deterministic_period",
    "deterministic_permutation",
    "faro_trace",
    "single_shuffle_distribution",
    "Arrangement",
    "DeckSizeError",
    "compose",
    "enumerate_arrangements",
    "identity",
    "inverse",
    "rank",
    "rising_sequences",
    "unrank",
]
