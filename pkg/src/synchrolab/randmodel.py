"""Random automata, 1-out digraphs, and their functional-graph structure.

Every sampler is a pure function of (parameters, seed stream).  Streams are
PCG64 generators keyed by a master seed and a stream index through numpy's
SeedSequence spawn keys, so trial results never depend on execution order.
"""

from __future__ import annotations

import json
import math
from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .core import Automaton, StateSet
from .errors import CapacityError, InvalidInputError

PROB_SUM_TOL = 1e-12

# Subset-sum cap for the exact cyclic-vertex expectation.
EXACT_EXPECTATION_LIMIT = 25


@dataclass(frozen=True)
class Seed:
    """Master seed plus the stream derivation rule.

    stream(i) builds PCG64 over SeedSequence(master, spawn_key=(i,)); the
    pair (master, i) fully determines every draw of that stream.
    """

    master: int

    def __post_init__(self):
        if not 0 <= int(self.master) < 2**64:
            raise InvalidInputError("master seed must be an unsigned 64-bit integer")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.master)))

    def stream(self, index: int) -> np.random.Generator:
        index = int(index)
        if index < 0:
            raise InvalidInputError("stream index must be non-negative")
        seq = np.random.SeedSequence(self.master, spawn_key=(index,))
        return np.random.Generator(np.random.PCG64(seq))


def _as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, Seed):
        return seed.generator()
    return Seed(int(seed)).generator()


class ProbVector:
    """Probability vector (p_v): non-negative entries summing to 1."""

    def __init__(self, p):
        arr = np.asarray(p, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("probability vector must be 1-D and nonempty")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise InvalidInputError("probabilities must be finite and non-negative")
        if abs(float(arr.sum()) - 1.0) > PROB_SUM_TOL:
            raise InvalidInputError(
                f"probabilities must sum to 1 within {PROB_SUM_TOL}, got {float(arr.sum())!r}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        self._p = arr

    @classmethod
    def uniform(cls, n: int) -> "ProbVector":
        n = int(n)
        if n < 1:
            raise InvalidInputError("need at least one vertex")
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def from_json(cls, text: str) -> "ProbVector":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"invalid JSON probability vector: {exc}") from exc
        if not isinstance(data, list):
            raise InvalidInputError("probability vector JSON must be an array of reals")
        return cls(data)

    @property
    def p(self) -> np.ndarray:
        return self._p

    def __len__(self) -> int:
        return int(self._p.size)

    def __repr__(self) -> str:
        return f"ProbVector({self._p.tolist()!r})"


class FunctionalGraph:
    """Digraph with exactly one out-edge per vertex (a unary automaton)."""

    def __init__(self, succ):
        arr = np.asarray(succ, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("successor array must be 1-D and nonempty")
        n = arr.size
        if arr.min() < 0 or arr.max() >= n:
            raise InvalidInputError(f"successors must be vertices in [0, {n})")
        arr = arr.copy()
        arr.setflags(write=False)
        self._succ = arr

    @classmethod
    def from_automaton(cls, aut: Automaton) -> "FunctionalGraph":
        if aut.k != 1:
            raise InvalidInputError(f"expected a unary automaton, got k={aut.k}")
        return cls(aut.letter(0))

    def to_automaton(self) -> Automaton:
        return Automaton(self._succ.reshape(-1, 1))

    @property
    def n(self) -> int:
        return int(self._succ.size)

    @property
    def succ(self) -> np.ndarray:
        return self._succ

    def __eq__(self, other) -> bool:
        return isinstance(other, FunctionalGraph) and bool(
            np.array_equal(self._succ, other._succ)
        )

    def __repr__(self) -> str:
        return f"FunctionalGraph(n={self.n})"


class ExtinctionSequence:
    """Die-out probabilities q_0 < q_1 < ... of the critical mean-1 Poisson
    branching process; q_{k+1} = exp(-(1 - q_k)) with q_0 = 0."""

    def __init__(self, q):
        arr = np.asarray(q, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidInputError("extinction sequence must be 1-D and nonempty")
        if arr[0] != 0.0:
            raise InvalidInputError("extinction sequence must start at 0")
        if np.any(arr < 0) or np.any(arr >= 1.0):
            raise InvalidInputError("extinction values must lie in [0, 1)")
        if arr.size > 1 and not np.all(np.diff(arr) > 0):
            raise InvalidInputError("extinction sequence must be strictly increasing")
        arr = arr.copy()
        arr.setflags(write=False)
        self._q = arr

    @property
    def q(self) -> np.ndarray:
        return self._q

    @property
    def k_max(self) -> int:
        return int(self._q.size - 1)

    def __len__(self) -> int:
        return int(self._q.size)

    def __getitem__(self, k: int) -> float:
        return float(self._q[k])

    def __repr__(self) -> str:
        return f"ExtinctionSequence(k_max={self.k_max})"


def extinction_sequence(k_max: int) -> ExtinctionSequence:
    """q_0..q_{k_max} by the recurrence q_{k+1} = exp(-(1 - q_k)), q_0 = 0."""
    k_max = int(k_max)
    if k_max < 0:
        raise InvalidInputError("k_max must be non-negative")
    q = np.empty(k_max + 1)
    q[0] = 0.0
    for k in range(k_max):
        q[k + 1] = math.exp(-(1.0 - q[k]))
    return ExtinctionSequence(q)


def sample_uniform_automaton(n: int, k: int = 2, seed=0) -> Automaton:
    """Automaton with all n*k targets drawn independently uniform on [0, n)."""
    n, k = int(n), int(k)
    if n < 1:
        raise InvalidInputError("need at least one state")
    if k < 1:
        raise InvalidInputError("need at least one letter")
    rng = _as_generator(seed)
    table = rng.integers(0, n, size=(n, k), dtype=np.int64)
    return Automaton(table)


def sample_one_out_digraph(p, seed=0) -> FunctionalGraph:
    """1-out digraph whose edge endpoints are i.i.d. with distribution p.

    A uniform p takes the same integer-sampling path as the automaton
    sampler, so the two agree draw for draw on a shared stream.
    """
    if not isinstance(p, ProbVector):
        p = ProbVector(p)
    rng = _as_generator(seed)
    n = len(p)
    vals = p.p
    if np.all(vals == vals[0]):
        succ = rng.integers(0, n, size=n, dtype=np.int64)
    else:
        succ = rng.choice(n, size=n, p=vals / vals.sum())
    return FunctionalGraph(succ)


def cyclic_states(g: FunctionalGraph) -> StateSet:
    """Vertices lying on a directed cycle, found by one O(n) successor walk.

    Colors: 0 unvisited, 1 on the current walk, 2 finished.  When a walk
    re-enters itself the suffix from the first repeated vertex is a cycle.
    """
    succ = g.succ
    n = g.n
    color = np.zeros(n, dtype=np.uint8)
    cyclic = np.zeros(n, dtype=bool)
    for v0 in range(n):
        if color[v0]:
            continue
        path = []
        v = v0
        while color[v] == 0:
            color[v] = 1
            path.append(v)
            v = int(succ[v])
        if color[v] == 1:
            for w in path[path.index(v):]:
                cyclic[w] = True
        for w in path:
            color[w] = 2
    return StateSet._from_sorted_unique(n, np.flatnonzero(cyclic).astype(np.int64))


def survival_probability(n: int, t: int) -> float:
    """Probability prod_{i=1}^{t-1} (1 - i/n) that a uniform successor walk
    has not yet closed a cycle after t steps; 1 for t <= 1, 0 for t > n."""
    n, t = int(n), int(t)
    if n < 1:
        raise InvalidInputError("need at least one vertex")
    if t < 0:
        raise InvalidInputError("step count must be non-negative")
    if t > n:
        return 0.0
    if t <= 1:
        return 1.0
    return float(np.prod(1.0 - np.arange(1, t) / n))


def expected_cyclic_exact(p) -> float:
    """Exact expected number of cyclic vertices of a 1-out digraph on p.

    The expectation equals sum over nonempty subsets C of |C|! * prod_{y in C}
    p_y, i.e. sum_m m! e_m(p) with e_m the elementary symmetric polynomials,
    which this computes by the standard O(|V|^2) recurrence.
    """
    if not isinstance(p, ProbVector):
        p = ProbVector(p)
    nv = len(p)
    if nv > EXACT_EXPECTATION_LIMIT:
        raise CapacityError(
            f"exact expectation is capped at {EXACT_EXPECTATION_LIMIT} vertices, got {nv}"
        )
    e = np.zeros(nv + 1)
    e[0] = 1.0
    for x in p.p:
        e[1:] = e[1:] + x * e[:-1]
    total = 0.0
    fact = 1.0
    for m in range(1, nv + 1):
        fact *= m
        total += fact * float(e[m])
    return total


def check_bernoulli_inequality(a: int, b: int, x: float) -> bool:
    """Whether (1 - (a/b) x)^(b-a) >= exp(-a x) holds for the given triple.

    Requires integers 0 <= a <= b and a real 0 < x <= 1; with b = 0 both
    sides are 1.
    """
    a, b = int(a), int(b)
    x = float(x)
    if a < 0 or b < 0 or a > b:
        raise InvalidInputError("need integers 0 <= a <= b")
    if not 0.0 < x <= 1.0:
        raise InvalidInputError("need 0 < x <= 1")
    if b == 0:
        return True
    lhs = (1.0 - (a / b) * x) ** (b - a)
    rhs = math.exp(-a * x)
    return lhs >= rhs


def distance_to_set(g: FunctionalGraph, targets) -> dict[int, int]:
    """Shortest directed-path length from every vertex to the target set.

    Returns {vertex: distance} containing only vertices that can reach the
    set (members have distance 0); unreachable vertices are simply absent,
    never encoded by a sentinel value.  Computed by one backward BFS over
    the reversed edges.
    """
    if isinstance(targets, StateSet):
        if targets.n != g.n:
            raise InvalidInputError(
                f"target set is over [0, {targets.n}) but the graph has {g.n} vertices"
            )
        members = targets.members
    else:
        members = np.unique(np.asarray(list(targets), dtype=np.int64))
        if members.size and (members[0] < 0 or members[-1] >= g.n):
            raise InvalidInputError(f"targets must lie in [0, {g.n})")
    if members.size == 0:
        raise InvalidInputError("target set must be nonempty")

    succ = g.succ
    n = g.n
    # preds of v are order[start[v]:start[v+1]]
    order = np.argsort(succ, kind="stable")
    start = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(succ, minlength=n), out=start[1:])

    dist = {int(v): 0 for v in members}
    queue = deque(int(v) for v in members)
    while queue:
        v = queue.popleft()
        d = dist[v] + 1
        for u in order[start[v]:start[v + 1]]:
            u = int(u)
            if u not in dist:
                dist[u] = d
                queue.append(u)
    return dist
