"""Small fixture automata shared across test modules."""

import numpy as np

from synchrolab import Automaton


def constant_automaton(n: int, k: int = 2) -> Automaton:
    """Every letter maps every state to 0."""
    return Automaton(np.zeros((n, k), dtype=np.int64))


def permutation_automaton(n: int, k: int = 2) -> Automaton:
    """Letter 0 is the cyclic shift, all other letters the identity; no pair
    of distinct states can ever merge."""
    table = np.tile(np.arange(n, dtype=np.int64).reshape(-1, 1), (1, k))
    table[:, 0] = (np.arange(n) + 1) % n
    return Automaton(table)


def chain_automaton() -> Automaton:
    """Unary 3-state chain 0 -> 1 -> 2 -> 2."""
    return Automaton([[1], [2], [2]])
