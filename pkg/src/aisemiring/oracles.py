"""Syntactic characterizations of u ≈ u+q in specific small algebras.

Each `oracle_*` takes a UQPair and returns a bool (or NOT_COVERED where the
condition is only stated for some shapes of q). The harnesses compare them
with brute-force satisfaction over a bounded corpus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .algebra import FiniteAiSemiring, adjoin_zero
from .satisfaction import Corpus, CorpusEvaluator, satisfies
from .terms import (
    Identity,
    TermSum,
    UQPair,
    Word,
    content,
    head_excluding,
    longer_than,
    linear_letters,
    multiplicity,
    of_length,
    prefix_content,
    property_T,
    same_head,
    term_content,
    within_content,
)


class _NotCovered:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "not-covered"

    def __bool__(self) -> bool:
        raise TypeError("NOT_COVERED has no truth value")


NOT_COVERED = _NotCovered()


def _fmt(v) -> str:
    return "not-covered" if v is NOT_COVERED else str(bool(v)).lower()


# ------------------------------------------------------------------ oracles

def oracle_s0(pair: UQPair, base: FiniteAiSemiring, checker: Callable[[TermSum, Word], bool] | None = None) -> bool:
    """u ≈ u+q holds in base with a zero adjoined."""
    d = within_content(pair.u.summands, pair.q)
    if not d:
        return False
    dq = TermSum(d)
    if checker is not None:
        return checker(dq, pair.q)
    return satisfies(base, Identity(dq, dq + pair.q)).holds


def oracle_s57(pair: UQPair) -> bool:
    u, q = pair.u.summands, pair.q
    return (
        bool(longer_than(2, u))
        and set(q.letters[:-1]) <= prefix_content(u)
        and q.letters[-1] in term_content(u)
    )


def oracle_s53(pair: UQPair):
    u, q = pair.u.summands, pair.q
    if not longer_than(2, u) or not content(q) <= term_content(u):
        return False
    if len(q) == 1:
        return True
    if len(q) == 2:
        x, y = q.letters
        if x == y:
            return any(multiplicity(x, w) >= 2 for w in u)
        return any(
            {x, y} <= content(w) or multiplicity(x, w) >= 2 or multiplicity(y, w) >= 2 for w in u
        )
    return NOT_COVERED


def oracle_s58(pair: UQPair) -> bool:
    u, q = pair.u.summands, pair.q
    long_ = longer_than(2, u)
    heads = same_head(u, q)
    if not long_ or not heads:
        return False
    if len(q) >= 2:
        return bool(long_ & heads)
    return True


def oracle_s59(pair: UQPair) -> bool:
    u, q = pair.u.summands, pair.q
    if any(len(w) >= 3 for w in u):
        return True
    if len(q) == 1:
        return content(q) <= term_content(u)
    if len(q) == 2:
        return content(q) <= term_content(of_length(2, u))
    return False


def oracle_s60(pair: UQPair) -> bool:
    u, q = pair.u.summands, pair.q
    long_ = longer_than(2, u)
    if not long_:
        return False
    if len(q) == 1:
        return content(q) <= term_content(u)
    return content(q) <= term_content(long_)


def oracle_s44(pair: UQPair) -> bool:
    u, q = pair.u.summands, pair.q
    d = within_content(u, q)
    if len(q) < 2 or not d:
        return False
    return all(any(multiplicity(x, w) <= 1 for w in d) for x in linear_letters(q))


def oracle_s46(pair: UQPair) -> bool:
    u, q = pair.u.summands, pair.q
    d = within_content(u, q)
    if len(q) < 2 or not d:
        return False
    t = q.letters[-1]
    if multiplicity(t, q) == 1:
        return any(t not in w.letters[:-1] for w in d)
    return True


def oracle_s41(pair: UQPair) -> bool:
    u, q = pair.u.summands, pair.q
    letters = sorted(content(q))
    for k in range(len(letters) + 1):
        for Y in itertools.combinations(letters, k):
            target = head_excluding(Y, q)
            if not any(head_excluding(Y, w) == target for w in u):
                return False
    return True


def oracle_s2(pair: UQPair) -> bool:
    u, q = pair.u.summands, pair.q
    if any(len(w) >= 3 for w in u):
        return True
    c1 = term_content(of_length(1, u))
    c2 = term_content(of_length(2, u))
    if c1 & c2:
        return True
    if len(q) == 1:
        return q in u
    if len(q) == 2:
        return content(q) <= c2
    return False


def oracle_s4(pair: UQPair) -> bool:
    u, q = pair.u.summands, pair.q
    if q in u:
        return True
    if not content(q) <= term_content(u) or not longer_than(2, u):
        return False
    if property_T(u):
        return property_T(u | {q})
    return True


NECESSITY_ORACLES = {
    "s57": ("S_57", oracle_s57),
    "s58": ("S_58", oracle_s58),
    "s59": ("S_59", oracle_s59),
    "s60": ("S_60", oracle_s60),
    "s44": ("S_44", oracle_s44),
    "s46": ("S_46", oracle_s46),
    "s53": ("S_53", oracle_s53),
}

EXACT_ORACLES = {
    "s41": ("S_41", oracle_s41),
    "s2": ("S_2", oracle_s2),
    "s4": ("S_4", oracle_s4),
}


# ----------------------------------------------------------------- harness

@dataclass
class OracleReport:
    oracle: str
    algebra: str
    mode: str  # necessity | equivalence
    checked: int
    violations: list[tuple[UQPair, bool, object]] = field(default_factory=list)
    not_covered: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [f"{p} | satisfies={_fmt(s)} oracle={_fmt(o)}" for p, s, o in self.violations]

    def summary(self) -> str:
        if self.mode == "equivalence":
            verdict = f"exact ({self.checked} pairs)" if self.passed else f"{len(self.violations)} disagreements ({self.checked} pairs)"
            return f"equivalence: {verdict}"
        verdict = "holds" if self.passed else f"{len(self.violations)} violations"
        extra = f" not-covered={self.not_covered}" if self.not_covered else ""
        return f"necessity: {verdict} ({self.checked} pairs){extra}"


def _corpus_truth(algebra: FiniteAiSemiring, corpus: Corpus | Iterable[UQPair]):
    """(pairs, truth list) for either a Corpus or an explicit list of pairs."""
    if isinstance(corpus, Corpus):
        return corpus.pairs(), CorpusEvaluator(algebra, corpus).pair_mask().tolist()
    pairs = list(corpus)
    return pairs, [satisfies(algebra, p.identity()).holds for p in pairs]


def check_necessity(
    oracle: Callable[[UQPair], object],
    algebra: FiniteAiSemiring,
    corpus,
    name: str = "",
    nontrivial_only: bool = True,
) -> OracleReport:
    """Pairs that hold in the algebra while the oracle says False."""
    pairs, truth = _corpus_truth(algebra, corpus)
    report = OracleReport(name, algebra.name or "", "necessity", 0)
    for p, sat in zip(pairs, truth):
        if nontrivial_only and p.is_trivial():
            continue
        report.checked += 1
        if not sat:
            continue
        v = oracle(p)
        if v is NOT_COVERED:
            report.not_covered += 1
        elif not v:
            report.violations.append((p, sat, v))
    return report


def check_equivalence(
    oracle: Callable[[UQPair], object],
    algebra: FiniteAiSemiring,
    corpus,
    name: str = "",
) -> OracleReport:
    """Every pair where the oracle and brute force disagree."""
    pairs, truth = _corpus_truth(algebra, corpus)
    report = OracleReport(name, algebra.name or "", "equivalence", 0)
    for p, sat in zip(pairs, truth):
        report.checked += 1
        v = oracle(p)
        if v is NOT_COVERED or bool(v) != sat:
            report.violations.append((p, sat, v))
    return report


def check_s0(base: FiniteAiSemiring, corpus: Corpus) -> OracleReport:
    """oracle_s0 against satisfaction in adjoin_zero(base), over the whole corpus."""
    zero = adjoin_zero(base, f"{base.name}^0" if base.name else None)
    truth = CorpusEvaluator(zero, corpus).pair_mask()
    in_base = CorpusEvaluator(base, corpus)

    def checker(dq: TermSum, q: Word) -> bool:
        s = corpus.index_of_term(dq)
        if s is None:
            return satisfies(base, Identity(dq, dq + q)).holds
        return in_base.holds(s, corpus.word_index[q])

    report = OracleReport("s0", zero.name or "", "equivalence", 0)
    for k in range(len(corpus)):
        p = corpus.pair(k)
        report.checked += 1
        v = oracle_s0(p, base, checker)
        if v != bool(truth[k]):
            report.violations.append((p, bool(truth[k]), v))
    return report


def negated(oracle: Callable[[UQPair], object]) -> Callable[[UQPair], bool]:
    def inverse(pair: UQPair) -> bool:
        v = oracle(pair)
        return True if v is NOT_COVERED else not v

    return inverse
