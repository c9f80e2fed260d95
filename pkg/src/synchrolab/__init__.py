"""Synchronizing words for random automata.

Core objects (Automaton, Word, StateSet), random-structure samplers and
exact formulas, reset-word constructions with exact oracles, and a seeded
Monte Carlo experiment harness.  See the experiments and cli modules for
the measurement runners and the command-line front end.
"""

from .core import (
    Automaton,
    StateSet,
    Word,
    apply_word,
    cerny_automaton,
    image,
    is_reset_word,
    iterate_unary_image,
    read_dfa,
    write_dfa,
)
from .errors import (
    CapacityError,
    InvalidInputError,
    NotSynchronizableError,
    SynchrolabError,
)
from .randmodel import (
    ExtinctionSequence,
    FunctionalGraph,
    ProbVector,
    Seed,
    check_bernoulli_inequality,
    cyclic_states,
    distance_to_set,
    expected_cyclic_exact,
    extinction_sequence,
    sample_one_out_digraph,
    sample_uniform_automaton,
    survival_probability,
)
from .sync import (
    PairDistanceResult,
    SyncReport,
    all_pairs_merge_radius,
    exact_shortest_reset,
    greedy_synchronize,
    pair_shortest_merge,
    phase1_word_interleaved,
    phase1_word_unary,
    two_phase_synchronize,
)

__version__ = "0.1.0"

__all__ = [
    "Automaton",
    "CapacityError",
    "ExtinctionSequence",
    "FunctionalGraph",
    "InvalidInputError",
    "NotSynchronizableError",
    "PairDistanceResult",
    "ProbVector",
    "Seed",
    "StateSet",
    "SyncReport",
    "SynchrolabError",
    "Word",
    "all_pairs_merge_radius",
    "apply_word",
    "cerny_automaton",
    "check_bernoulli_inequality",
    "cyclic_states",
    "distance_to_set",
    "exact_shortest_reset",
    "expected_cyclic_exact",
    "extinction_sequence",
    "greedy_synchronize",
    "image",
    "is_reset_word",
    "iterate_unary_image",
    "pair_shortest_merge",
    "phase1_word_interleaved",
    "phase1_word_unary",
    "read_dfa",
    "sample_one_out_digraph",
    "sample_uniform_automaton",
    "survival_probability",
    "two_phase_synchronize",
    "write_dfa",
]
