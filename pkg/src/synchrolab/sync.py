"""Reset-word construction: image-shrinking phase words, pair merging by
product-space BFS, greedy full synchronization, and the exact shortest-reset
oracle over the power set.

Unordered state pairs {u, v} are kept canonical with u <= v.  The wide
searches encode a pair as the int64 u * n + v; the dense all-pairs table
uses the upper-triangle index u*n - u*(u-1)/2 + (v-u) to halve memory.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import Automaton, StateSet, Word, image, is_reset_word
from .errors import CapacityError, InvalidInputError, NotSynchronizableError

# Product space guards: the dense pair table is O(n^2/2) ints, the wide BFS
# keeps every visited pair code in memory.
RADIUS_STATE_LIMIT = 20_000
PAIR_VISIT_LIMIT = 20_000_000

# Power-set search guard.
SUBSET_STATE_LIMIT = 24

_DIST_INF = np.int32(2**30)
_SWEEP_CHUNK = 1 << 24


def phase1_word_unary(n: int) -> Word:
    """One letter repeated ceil(2 sqrt(n ln n)) times."""
    n = int(n)
    if n < 2:
        raise InvalidInputError("need at least two states")
    reps = math.ceil(2.0 * math.sqrt(n * math.log(n)))
    return Word([0] * reps)


def phase1_word_interleaved(n: int) -> Word:
    """A block of ceil(sqrt(n)) a's, then ceil(sqrt(log2 n)) repetitions of
    a single b followed by another such a-block."""
    n = int(n)
    if n < 2:
        raise InvalidInputError("need at least two states")
    block = math.isqrt(n)
    if block * block < n:
        block += 1
    rounds = math.ceil(math.sqrt(math.log2(n)))
    letters = [0] * block
    for _ in range(rounds):
        letters.append(1)
        letters.extend([0] * block)
    return Word(letters)


def default_pair_search_limit(n: int) -> int:
    """Depth budget ceil(6 log2 n) + 8 for the forward pair search; generous
    slack over the typical 3 log2 n merge radius avoids false negatives."""
    n = int(n)
    if n < 1:
        raise InvalidInputError("need at least one state")
    return math.ceil(6.0 * math.log2(n)) + 8 if n > 1 else 8


@dataclass(frozen=True)
class PairDistanceResult:
    """Shortest merge length of one state pair; distance is math.inf and the
    witness is None when no merging word was found."""

    distance: int | float
    witness: Word | None


@dataclass(frozen=True)
class SyncReport:
    """Outcome of the two-phase construction on one automaton."""

    word: Word
    phase1_length: int
    phase2_length: int
    intermediate_image_size: int
    verified: bool

    def as_dict(self) -> dict:
        return {
            "word": self.word.text,
            "length": len(self.word),
            "phase1_length": self.phase1_length,
            "phase2_length": self.phase2_length,
            "intermediate_image_size": self.intermediate_image_size,
            "verified": self.verified,
        }


def _in_sorted(haystack: np.ndarray, needles: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(haystack, needles)
    pos = np.minimum(pos, haystack.size - 1)
    return haystack[pos] == needles


def _reconstruct_word(levels, depth: int, pos: int, final_letter: int) -> Word:
    letters_rev = [final_letter]
    while depth > 0:
        _codes, _labels, parents, letts = levels[depth]
        letters_rev.append(int(letts[pos]))
        pos = int(parents[pos])
        depth -= 1
    return Word(reversed(letters_rev))


def _merge_search(aut, src_x, src_y, max_len=None, visit_limit=PAIR_VISIT_LIMIT):
    """Level-synchronous BFS over unordered pairs from many sources at once.

    src_x/src_y are canonical (x < y) pairs in lexicographic order; each BFS
    node carries the smallest source index that reaches it in the minimal
    number of steps, so the first diagonal hit identifies a closest source
    deterministically (ties broken by source index, then letter, then
    frontier position).  Returns (source_index, word) or None when no source
    can merge within max_len letters (None = search to exhaustion).
    """
    n = aut.n
    letter_maps = [aut.letter(c) for c in range(aut.k)]
    codes = src_x.astype(np.int64) * n + src_y.astype(np.int64)
    labels = np.arange(codes.size, dtype=np.int64)
    levels = [(codes, labels, None, None)]
    visited = codes
    depth = 0
    while codes.size:
        if max_len is not None and depth + 1 > max_len:
            return None
        u, v = np.divmod(codes, n)
        best = None  # (source label, letter, frontier position)
        nxt_codes, nxt_labels, nxt_parents, nxt_letters = [], [], [], []
        for c, tc in enumerate(letter_maps):
            a = tc[u]
            b = tc[v]
            merged = a == b
            if merged.any():
                pos = np.flatnonzero(merged)
                lab = labels[pos]
                i = int(np.argmin(lab))  # first minimum = smallest position
                cand = (int(lab[i]), c, int(pos[i]))
                if best is None or cand < best:
                    best = cand
            lo = np.minimum(a, b).astype(np.int64)
            hi = np.maximum(a, b).astype(np.int64)
            nxt_codes.append(lo * n + hi)
            nxt_labels.append(labels)
            nxt_parents.append(np.arange(codes.size, dtype=np.int64))
            nxt_letters.append(np.full(codes.size, c, dtype=np.int64))
        if best is not None:
            label, letter, pos = best
            return label, _reconstruct_word(levels, depth, pos, letter)

        cand_codes = np.concatenate(nxt_codes)
        cand_labels = np.concatenate(nxt_labels)
        cand_parents = np.concatenate(nxt_parents)
        cand_letters = np.concatenate(nxt_letters)
        # One entry per code, keeping the smallest (label, letter, parent).
        order = np.lexsort((cand_parents, cand_letters, cand_labels, cand_codes))
        cand_codes = cand_codes[order]
        keep = np.empty(cand_codes.size, dtype=bool)
        keep[0] = True
        np.not_equal(cand_codes[1:], cand_codes[:-1], out=keep[1:])
        keep &= ~_in_sorted(visited, cand_codes)
        sel = order[keep]
        codes = cand_codes[keep]
        if codes.size == 0:
            return None
        labels = cand_labels[sel]
        levels.append((codes, labels, cand_parents[sel], cand_letters[sel]))
        visited = np.sort(np.concatenate([visited, codes]))
        if visited.size > visit_limit:
            raise CapacityError(
                f"pair search visited more than {visit_limit} pairs"
            )
        depth += 1
    return None


def pair_shortest_merge(aut: Automaton, x: int, y: int, max_len=None) -> PairDistanceResult:
    """Length of a shortest word sending x and y to a common state, with a
    witness; math.inf when no merge exists within max_len letters (default
    budget default_pair_search_limit(n), math.inf searches to exhaustion)."""
    x, y = int(x), int(y)
    n = aut.n
    if not (0 <= x < n and 0 <= y < n):
        raise InvalidInputError(f"states must lie in [0, {n})")
    if max_len is None:
        max_len = default_pair_search_limit(n)
    elif max_len is not math.inf:
        max_len = int(max_len)
        if max_len < 1:
            raise InvalidInputError("max_len must be positive")
    if x == y:
        return PairDistanceResult(0, Word())
    lo, hi = (x, y) if x < y else (y, x)
    res = _merge_search(
        aut,
        np.array([lo], dtype=np.int64),
        np.array([hi], dtype=np.int64),
        max_len=None if max_len is math.inf else max_len,
    )
    if res is None:
        return PairDistanceResult(math.inf, None)
    _label, word = res
    return PairDistanceResult(len(word), word)


def _pair_distance_table(aut: Automaton) -> tuple[np.ndarray, np.ndarray]:
    """Distance-to-diagonal of every canonical pair, by repeated relaxation.

    dist starts at 0 on the diagonal and sweeps dist[p] = min over letters of
    dist[succ(p)] + 1 until the fixpoint; each sweep settles one more BFS
    layer of the reversed product graph.  Returns (dist, row_offsets).
    """
    n = aut.n
    if n > RADIUS_STATE_LIMIT:
        raise CapacityError(
            f"all-pairs table is capped at {RADIUS_STATE_LIMIT} states, got {n}"
        )
    m = n * (n + 1) // 2
    offsets = np.arange(n + 1, dtype=np.int64)
    offsets = offsets * n - offsets * (offsets - 1) // 2
    succ = [np.empty(m, dtype=np.int32) for _ in range(aut.k)]
    for c in range(aut.k):
        tc = aut.letter(c)
        out = succ[c]
        for u in range(n):
            s, e = int(offsets[u]), int(offsets[u + 1])
            au = int(tc[u])
            av = tc[u:]
            lo = np.minimum(au, av).astype(np.int64)
            hi = np.maximum(au, av)
            out[s:e] = lo * n - lo * (lo - 1) // 2 + (hi - lo)

    dist = np.full(m, _DIST_INF, dtype=np.int32)
    dist[offsets[:n]] = 0  # diagonal pairs (u, u)
    while True:
        new = dist.copy()
        for c in range(aut.k):
            sc = succ[c]
            for lo_ix in range(0, m, _SWEEP_CHUNK):
                sl = slice(lo_ix, min(lo_ix + _SWEEP_CHUNK, m))
                np.minimum(new[sl], dist[sc[sl]] + np.int32(1), out=new[sl])
        if np.array_equal(new, dist):
            return dist, offsets
        dist = new


def all_pairs_merge_radius(aut: Automaton) -> int | float:
    """Maximum over unordered pairs of the shortest merge length, or math.inf
    when some pair can never merge."""
    if aut.n < 2:
        raise InvalidInputError("need at least two states")
    dist, _offsets = _pair_distance_table(aut)
    worst = int(dist.max())
    return math.inf if worst >= int(_DIST_INF) else worst


def greedy_synchronize(aut: Automaton, A: StateSet) -> Word:
    """Collapse A to a single state by repeatedly merging a closest pair.

    Each round runs one multi-source pair BFS with every pair of the current
    image as a source, appends the winning merge word, and applies it to the
    whole set.  Raises NotSynchronizableError naming a stuck pair when no
    pair of the surviving image can merge.
    """
    if A.n != aut.n:
        raise InvalidInputError(
            f"state set is over [0, {A.n}) but the automaton has {aut.n} states"
        )
    if len(A) == 0:
        raise InvalidInputError("cannot synchronize an empty state set")
    cur = A.members
    out: list[int] = []
    while cur.size > 1:
        npairs = cur.size * (cur.size - 1) // 2
        if npairs > PAIR_VISIT_LIMIT:
            raise CapacityError(f"{npairs} candidate pairs exceed the search budget")
        i, j = np.triu_indices(cur.size, k=1)
        res = _merge_search(aut, cur[i], cur[j])
        if res is None:
            raise NotSynchronizableError((int(cur[0]), int(cur[1])))
        _label, word = res
        for c in word:
            cur = np.unique(aut.letter(c)[cur])
        out.extend(word)
    return Word(out)


def two_phase_synchronize(aut: Automaton) -> SyncReport:
    """Interleaved phase-1 word to shrink the image, then greedy pairwise
    merging; the result is re-verified before reporting."""
    if aut.k != 2:
        raise InvalidInputError(
            f"two-phase construction requires a two-letter alphabet, got k={aut.k}"
        )
    if aut.n < 2:
        raise InvalidInputError("need at least two states")
    w1 = phase1_word_interleaved(aut.n)
    mid = image(aut, w1, StateSet.full(aut.n))
    w2 = greedy_synchronize(aut, mid)
    word = w1 + w2
    return SyncReport(
        word=word,
        phase1_length=len(w1),
        phase2_length=len(w2),
        intermediate_image_size=len(mid),
        verified=is_reset_word(aut, word),
    )


def _subset_image_tables(aut: Automaton, chunks: int) -> list[list[list[int]]]:
    # tables[c][j][byte] = image mask of the byte placed at bit offset 8*j.
    n = aut.n
    tables = []
    for c in range(aut.k):
        tc = aut.letter(c)
        per_chunk = []
        for j in range(chunks):
            tbl = [0] * 256
            for b in range(1, 256):
                low = b & (-b)
                state = 8 * j + low.bit_length() - 1
                bit = 1 << int(tc[state]) if state < n else 0
                tbl[b] = tbl[b ^ low] | bit
            per_chunk.append(tbl)
        tables.append(per_chunk)
    return tables


def exact_shortest_reset(aut: Automaton) -> Word | None:
    """A minimum-length reset word by BFS over subsets of the state set,
    or None when no word collapses the automaton.  Guarded at 24 states."""
    n = aut.n
    if n > SUBSET_STATE_LIMIT:
        raise CapacityError(
            f"power-set search is capped at {SUBSET_STATE_LIMIT} states, got {n}"
        )
    if n == 1:
        return Word()
    full = (1 << n) - 1
    chunks = (n + 7) // 8
    tables = _subset_image_tables(aut, chunks)
    parent: dict[int, tuple[int, int] | None] = {full: None}
    queue = deque([full])
    while queue:
        mask = queue.popleft()
        for c in range(aut.k):
            tabs = tables[c]
            img = 0
            rest = mask
            for j in range(chunks):
                img |= tabs[j][rest & 0xFF]
                rest >>= 8
            if img in parent:
                continue
            parent[img] = (mask, c)
            if img.bit_count() == 1:
                letters_rev = []
                at = img
                while parent[at] is not None:
                    prev, letter = parent[at]
                    letters_rev.append(letter)
                    at = prev
                return Word(reversed(letters_rev))
            queue.append(img)
    return None
