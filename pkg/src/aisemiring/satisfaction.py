"""Deciding identities in finite ai-semirings by exhaustive assignment sweeps.

Two engines share the same semantics:

* `satisfies` checks a single identity, sweeping assignments in
  lexicographic order (variables in natural order, values 1..n) so that the
  reported witness is the least failing assignment;
* `CorpusEvaluator` decides every pair u ≈ u+q of a bounded corpus at once,
  which is what the oracle harnesses and completeness sweeps need.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

import numpy as np

from .algebra import FiniteAiSemiring
from .terms import (
    Identity,
    IdentityScheme,
    TermSum,
    UQPair,
    Word,
    var_key,
)

DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 16


class BudgetExceeded(RuntimeError):
    pass


class UnassignedVariable(KeyError):
    pass


def eval_word(w: Word, assignment: Mapping[str, int], alg: FiniteAiSemiring) -> int:
    try:
        acc = assignment[w.letters[0]]
        for x in w.letters[1:]:
            acc = alg.times(acc, assignment[x])
    except KeyError as exc:
        raise UnassignedVariable(f"variable {exc.args[0]} has no value") from None
    return acc


def eval_term(u: TermSum, assignment: Mapping[str, int], alg: FiniteAiSemiring) -> int:
    words = u.sorted()
    acc = eval_word(words[0], assignment, alg)
    for w in words[1:]:
        acc = alg.plus(acc, eval_word(w, assignment, alg))
    return acc


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: dict[str, int] | None = None
    identity: Identity | None = None

    def __bool__(self) -> bool:
        return self.holds

    def witness_text(self) -> str:
        if self.witness is None:
            return ""
        return ",".join(f"{k}={v}" for k, v in self.witness.items())

    def __str__(self) -> str:
        return "holds" if self.holds else f"fails {self.witness_text()}"


def _word_values(w: Word, cols: dict[str, np.ndarray], M: np.ndarray) -> np.ndarray:
    acc = cols[w.letters[0]]
    for x in w.letters[1:]:
        acc = M[acc, cols[x]]
    return acc


def _term_values(u: TermSum, cols, A, M) -> np.ndarray:
    words = u.sorted()
    acc = _word_values(words[0], cols, M)
    for w in words[1:]:
        acc = A[acc, _word_values(w, cols, M)]
    return acc


def _assignment_block(n: int, v: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic list of all assignments (0-based values)."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, v), dtype=np.int64)
    for j in range(v - 1, -1, -1):
        out[:, j] = idx % n
        idx //= n
    return out


def satisfies(alg: FiniteAiSemiring, identity: Identity, budget: int = DEFAULT_BUDGET) -> Verdict:
    names = identity.variables()
    n, v = alg.order, len(names)
    total = n**v
    if total > budget:
        raise BudgetExceeded(f"{total} assignments exceed the budget of {budget}")
    A, M = alg.add0, alg.mul0
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        block = _assignment_block(n, v, start, stop)
        cols = {x: block[:, i] for i, x in enumerate(names)}
        bad = _term_values(identity.lhs, cols, A, M) != _term_values(identity.rhs, cols, A, M)
        if bad.any():
            row = block[int(np.argmax(bad))]
            return Verdict(False, {x: int(row[i]) + 1 for i, x in enumerate(names)}, identity)
    return Verdict(True, None, identity)


def satisfies_scheme(alg: FiniteAiSemiring, scheme: IdentityScheme | Identity, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Holds iff every expansion holds; otherwise the first failing expansion's verdict."""
    if isinstance(scheme, Identity):
        return satisfies(alg, scheme, budget)
    for ident in scheme.expand():
        verdict = satisfies(alg, ident, budget)
        if not verdict.holds:
            return verdict
    return Verdict(True, None, scheme.identity)


def satisfies_pair(alg: FiniteAiSemiring, pair: UQPair, budget: int = DEFAULT_BUDGET) -> bool:
    return satisfies(alg, pair.identity(), budget).holds


# ------------------------------------------------------------------ corpus

def default_variables(count: int) -> list[str]:
    if count <= 3:
        return ["x", "y", "z"][:count]
    return [f"x{i}" for i in range(1, count + 1)]


@dataclass(eq=False)
class Corpus:
    """All pairs u ≈ u+q within the bounds, one per renaming class.

    words: every word of length 1..L over the variables, shortlex ordered.
    sums: tuples of word indices (sorted, length 1..K), in combination order.
    pair_sum, pair_word: parallel arrays listing the kept pairs.
    """

    variables: list[str]
    max_len: int
    max_summands: int
    words: list[Word]
    sums: list[tuple[int, ...]]
    pair_sum: np.ndarray
    pair_word: np.ndarray

    def __len__(self) -> int:
        return len(self.pair_sum)

    def term(self, s: int) -> TermSum:
        return TermSum(frozenset(self.words[i] for i in self.sums[s]))

    def pair(self, k: int) -> UQPair:
        return UQPair(self.term(int(self.pair_sum[k])), self.words[int(self.pair_word[k])])

    def pairs(self) -> list[UQPair]:
        return [self.pair(k) for k in range(len(self))]

    def nontrivial_mask(self) -> np.ndarray:
        return np.array(
            [int(self.pair_word[k]) not in self.sums[int(self.pair_sum[k])] for k in range(len(self))],
            dtype=bool,
        )

    @cached_property
    def sum_index(self) -> dict[tuple[int, ...], int]:
        return {s: i for i, s in enumerate(self.sums)}

    def index_of_term(self, u: TermSum) -> int | None:
        widx = self.word_index
        try:
            key = tuple(sorted(widx[w] for w in u.summands))
        except KeyError:
            return None
        return self.sum_index.get(key)

    @cached_property
    def word_index(self) -> dict[Word, int]:
        return {w: i for i, w in enumerate(self.words)}


@lru_cache(maxsize=8)
def build_corpus(num_vars: int = 3, max_len: int = 3, max_summands: int = 3, dedup: bool = True) -> Corpus:
    names = default_variables(num_vars)
    word_tuples = [t for k in range(1, max_len + 1) for t in itertools.product(range(num_vars), repeat=k)]
    words = [Word(tuple(names[i] for i in t)) for t in word_tuples]
    nw = len(words)
    sums = [c for k in range(1, max_summands + 1) for c in itertools.combinations(range(nw), k)]
    ns = len(sums)
    pair_sum = np.repeat(np.arange(ns, dtype=np.int64), nw)
    pair_word = np.tile(np.arange(nw, dtype=np.int64), ns)
    if dedup and num_vars > 1:
        keep = _renaming_representatives(word_tuples, sums, num_vars, max_summands)
        pair_sum, pair_word = pair_sum[keep], pair_word[keep]
    return Corpus(names, max_len, max_summands, words, sums, pair_sum, pair_word)


def _renaming_representatives(word_tuples, sums, num_vars, K) -> np.ndarray:
    """Mask of pairs whose code is least among all variable renamings."""
    nw = len(word_tuples)
    ns = len(sums)
    windex = {t: i for i, t in enumerate(word_tuples)}
    perms = list(itertools.permutations(range(num_vars)))
    # word index under each renaming
    wperm = np.array([[windex[tuple(p[x] for x in t)] for t in word_tuples] for p in perms])
    padded = np.full((ns, K), nw, dtype=np.int64)  # nw sorts after every word
    for i, s in enumerate(sums):
        padded[i, : len(s)] = s
    base = nw + 1

    def encode(rows: np.ndarray) -> np.ndarray:
        code = np.zeros(len(rows), dtype=np.int64)
        for j in range(K):
            code = code * base + rows[:, j]
        return code

    codes = encode(padded)
    order = np.argsort(codes)
    sorted_codes = codes[order]
    best = None
    for k in range(len(perms)):
        mapped = np.where(padded < nw, wperm[k][np.minimum(padded, nw - 1)], nw)
        mapped.sort(axis=1)
        sidx = order[np.searchsorted(sorted_codes, encode(mapped))]
        pair_code = sidx[:, None] * nw + wperm[k][None, :]
        best = pair_code if best is None else np.minimum(best, pair_code)
    own = np.arange(ns)[:, None] * nw + np.arange(nw)[None, :]
    return (best == own).reshape(-1)


class CorpusEvaluator:
    """Truth table of u ≈ u+q for every (sum, word) combination of a corpus."""

    def __init__(self, alg: FiniteAiSemiring, corpus: Corpus, budget: int = DEFAULT_BUDGET):
        n, v = alg.order, len(corpus.variables)
        total = n**v
        if total * len(corpus.words) > budget * 10:
            raise BudgetExceeded(f"corpus evaluation needs {total} assignments per word")
        A = alg.add0.astype(np.uint8)
        M = alg.mul0.astype(np.uint8)
        assign = _assignment_block(n, v, 0, total).astype(np.uint8)
        wv = np.empty((len(corpus.words), total), dtype=np.uint8)
        names = {x: i for i, x in enumerate(corpus.variables)}
        for i, w in enumerate(corpus.words):
            acc = assign[:, names[w.letters[0]]]
            for x in w.letters[1:]:
                acc = M[acc, assign[:, names[x]]]
            wv[i] = acc
        K = corpus.max_summands
        padded = np.array([s + (s[0],) * (K - len(s)) for s in corpus.sums], dtype=np.int64)
        sv = wv[padded[:, 0]]
        for j in range(1, K):
            sv = A[sv, wv[padded[:, j]]]
        self.word_values = wv
        self.sum_values = sv
        table = np.empty((len(corpus.sums), len(corpus.words)), dtype=bool)
        step = max(1, 2_000_000 // max(1, total * len(corpus.words)))
        for start in range(0, len(corpus.sums), step):
            block = sv[start : start + step]
            table[start : start + step] = (A[block[:, None, :], wv[None, :, :]] == block[:, None, :]).all(axis=2)
        self.table = table
        self.corpus = corpus
        self.algebra = alg

    def holds(self, sum_idx: int, word_idx: int) -> bool:
        return bool(self.table[sum_idx, word_idx])

    def pair_mask(self) -> np.ndarray:
        return self.table[self.corpus.pair_sum, self.corpus.pair_word]


def pair_truth(alg: FiniteAiSemiring, corpus: Corpus) -> np.ndarray:
    return CorpusEvaluator(alg, corpus).pair_mask()


def identities_of(
    alg: FiniteAiSemiring, max_vars: int = 3, max_len: int = 3, max_summands: int = 3
) -> list[Identity]:
    corpus = build_corpus(max_vars, max_len, max_summands)
    mask = pair_truth(alg, corpus)
    return [corpus.pair(int(k)).identity() for k in np.flatnonzero(mask)]


def sort_variables(names) -> list[str]:
    return sorted(names, key=var_key)
