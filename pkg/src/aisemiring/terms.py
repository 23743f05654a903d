"""Words, term sums, identities and the identity parser/printer.

Terms of ai-semirings are finite nonempty sets of words, so a `TermSum` is a
frozenset of `Word` values. All word and term statistics used by the
satisfaction oracles live here.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator


class TermSyntaxError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


_VAR_RE = re.compile(r"([a-z])(?:_?(\d+))?")


def var_key(name: str) -> tuple:
    """Sort key putting x2 before x10."""
    m = re.fullmatch(r"([a-z_]*?)(\d*)", name)
    if m is None:
        return (name, -1)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1)


@dataclass(frozen=True, order=False)
class Word:
    letters: tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("a word must have at least one letter")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def sort_key(self) -> tuple:
        return (len(self.letters), tuple(var_key(v) for v in self.letters))

    def reversed(self) -> "Word":
        return Word(self.letters[::-1])


def word(text: str) -> Word:
    return parse_word(text)


# Word statistics. Prefix and suffix return None for the empty word.

def head(w: Word) -> str:
    return w.letters[0]


def tail(w: Word) -> str:
    return w.letters[-1]


def content(w: Word) -> frozenset[str]:
    return frozenset(w.letters)


def length(w: Word) -> int:
    return len(w.letters)


def multiplicity(x: str, w: Word | None) -> int:
    if w is None:
        return 0
    return w.letters.count(x)


def prefix(w: Word) -> Word | None:
    return Word(w.letters[:-1]) if len(w.letters) > 1 else None


def suffix(w: Word) -> Word | None:
    return Word(w.letters[1:]) if len(w.letters) > 1 else None


def content_of(w: Word | None) -> frozenset[str]:
    return frozenset() if w is None else frozenset(w.letters)


def initial_part(w: Word) -> Word:
    """Keep only the first occurrence of every variable."""
    seen: list[str] = []
    for x in w.letters:
        if x not in seen:
            seen.append(x)
    return Word(tuple(seen))


def head_excluding(excluded: Iterable[str], w: Word) -> str | None:
    excluded = set(excluded)
    for x in w.letters:
        if x not in excluded:
            return x
    return None


def delete_letters(w: Word, erased: Iterable[str]) -> Word | None:
    erased = set(erased)
    kept = tuple(x for x in w.letters if x not in erased)
    return Word(kept) if kept else None


@dataclass(frozen=True)
class TermSum:
    summands: frozenset[Word]

    def __post_init__(self):
        if not isinstance(self.summands, frozenset):
            object.__setattr__(self, "summands", frozenset(self.summands))
        if not self.summands:
            raise ValueError("a term sum must have at least one summand")

    @classmethod
    def of(cls, *words: Word | str) -> "TermSum":
        return cls(frozenset(parse_word(w) if isinstance(w, str) else w for w in words))

    def __iter__(self) -> Iterator[Word]:
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.summands)

    def __contains__(self, w: Word) -> bool:
        return w in self.summands

    def __add__(self, other: "TermSum | Word") -> "TermSum":
        if isinstance(other, Word):
            return TermSum(self.summands | {other})
        return TermSum(self.summands | other.summands)

    def sorted(self) -> list[Word]:
        return sorted(self.summands, key=Word.sort_key)

    def variables(self) -> frozenset[str]:
        return frozenset(x for w in self.summands for x in w.letters)

    def __str__(self) -> str:
        return format_sum(self)


def term_content(u: Iterable[Word]) -> frozenset[str]:
    return frozenset(x for w in u for x in w.letters)


def prefix_content(u: Iterable[Word]) -> frozenset[str]:
    """c(p(u)): union of the contents of the prefixes of the summands."""
    return frozenset(x for w in u for x in w.letters[:-1])


# Summand filters. Each returns a frozenset of words (possibly empty).

def longer_than(k: int, u: Iterable[Word]) -> frozenset[Word]:
    return frozenset(w for w in u if len(w) >= k)


def shorter_than(k: int, u: Iterable[Word]) -> frozenset[Word]:
    return frozenset(w for w in u if len(w) <= k)


def of_length(k: int, u: Iterable[Word]) -> frozenset[Word]:
    return frozenset(w for w in u if len(w) == k)


def same_head(u: Iterable[Word], q: Word) -> frozenset[Word]:
    return frozenset(w for w in u if w.letters[0] == q.letters[0])


def within_content(u: Iterable[Word], q: Word) -> frozenset[Word]:
    cq = content(q)
    return frozenset(w for w in u if content(w) <= cq)


def linear_letters(q: Word) -> frozenset[str]:
    return frozenset(x for x in q.letters if q.letters.count(x) == 1)


# Short aliases matching the usual notation.
L_geq = longer_than
L_leq = shorter_than
L_eq = of_length
H_q = same_head
D_q = within_content
M_1 = linear_letters


def property_T(u: Iterable[Word]) -> bool:
    """Every tail occurs at most once in every summand, and only as that summand's tail."""
    u = list(u)
    for ui in u:
        t = ui.letters[-1]
        for uj in u:
            m = uj.letters.count(t)
            if m > 1:
                return False
            if m == 1 and uj.letters[-1] != t:
                return False
    return True


@dataclass(frozen=True)
class Identity:
    lhs: TermSum
    rhs: TermSum

    def variables(self) -> list[str]:
        return sorted(self.lhs.variables() | self.rhs.variables(), key=var_key)

    def is_trivial(self) -> bool:
        return self.lhs == self.rhs

    def reversed(self) -> "Identity":
        return Identity(
            TermSum(w.reversed() for w in self.lhs.summands),
            TermSum(w.reversed() for w in self.rhs.summands),
        )

    def __str__(self) -> str:
        return format_identity(self)


@dataclass(frozen=True)
class IdentityScheme:
    identity: Identity
    optional_vars: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "optional_vars", frozenset(self.optional_vars))
        unknown = self.optional_vars - set(self.identity.variables())
        if unknown:
            raise ValueError(f"optional variables not in identity: {sorted(unknown)}")

    def expand(self) -> list[Identity]:
        return expand_scheme(self)

    def reversed(self) -> "IdentityScheme":
        return IdentityScheme(self.identity.reversed(), self.optional_vars)

    def __str__(self) -> str:
        return format_scheme(self)


def _erase_side(side: TermSum, erased: frozenset[str]) -> TermSum | None:
    out = []
    for w in side.summands:
        d = delete_letters(w, erased)
        if d is None:
            return None
        out.append(d)
    return TermSum(frozenset(out))


def expand_scheme(scheme: IdentityScheme) -> list[Identity]:
    """One identity per erased subset of the optional variables.

    Erasing deletes the variable from every word; subsets that would leave
    some word empty are skipped. The result is deduplicated and ordered by
    subset size, then by the erased names.
    """
    opt = sorted(scheme.optional_vars, key=var_key)
    result: list[Identity] = []
    for k in range(len(opt) + 1):
        for erased in itertools.combinations(opt, k):
            es = frozenset(erased)
            lhs = _erase_side(scheme.identity.lhs, es)
            rhs = _erase_side(scheme.identity.rhs, es)
            if lhs is None or rhs is None:
                continue
            ident = Identity(lhs, rhs)
            if ident not in result:
                result.append(ident)
    if not result:
        raise ValueError(f"every expansion of {scheme} empties a word")
    return result


@dataclass(frozen=True)
class UQPair:
    """The inequality-shaped identity u ≈ u + q."""

    u: TermSum
    q: Word

    def identity(self) -> Identity:
        return Identity(self.u, self.u + self.q)

    def is_trivial(self) -> bool:
        return self.q in self.u

    def __str__(self) -> str:
        return format_identity(self.identity())

    @classmethod
    def parse(cls, text: str) -> "UQPair":
        ident = parse_identity(text)
        extra = ident.rhs.summands - ident.lhs.summands
        if not ident.lhs.summands <= ident.rhs.summands or len(extra) > 1:
            raise ValueError(f"not of the form u ≈ u + q: {text}")
        if not extra:
            return cls(ident.lhs, next(iter(ident.lhs.sorted())))
        return cls(ident.lhs, next(iter(extra)))


# ---------------------------------------------------------------- printing

def format_word(w: Word) -> str:
    # names are one letter plus optional digits, so plain juxtaposition is unambiguous
    parts = []
    for x, run in itertools.groupby(w.letters):
        k = len(list(run))
        parts.append(x if k == 1 else f"{x}^{k}")
    return "".join(parts)


def format_sum(u: TermSum) -> str:
    return " + ".join(format_word(w) for w in u.sorted())


def format_identity(ident: Identity) -> str:
    return f"{format_sum(ident.lhs)} ≈ {format_sum(ident.rhs)}"


def format_scheme(scheme: IdentityScheme) -> str:
    text = format_identity(scheme.identity)
    if scheme.optional_vars:
        text += " ; optional " + " ".join(sorted(scheme.optional_vars, key=var_key))
    return text


# ----------------------------------------------------------------- parsing

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise TermSyntaxError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def at_end(self) -> bool:
        return self.peek() == ""

    def var(self) -> str:
        self.skip()
        m = _VAR_RE.match(self.text, self.pos)
        if m is None:
            raise TermSyntaxError("expected a variable", self.pos)
        self.pos = m.end()
        return m.group(1) + (m.group(2) or "")

    def exponent(self) -> int:
        if self.peek() != "^":
            return 1
        self.pos += 1
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if m is None:
            raise TermSyntaxError("expected an exponent", self.pos)
        self.pos = m.end()
        k = int(m.group())
        if k < 1:
            raise TermSyntaxError("exponent must be positive", m.start())
        return k

    def factor(self) -> tuple[str, ...]:
        if self.peek() == "(":
            self.pos += 1
            inner = self.word()
            self.expect(")")
            return inner * self.exponent()
        x = self.var()
        return (x,) * self.exponent()

    def word(self) -> tuple[str, ...]:
        start = self.pos
        letters = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                letters += self.factor()
            elif ch == "(" or (ch and ch.isalpha()):
                letters += self.factor()
            else:
                break
        if not letters:
            raise TermSyntaxError("empty word", start)
        return letters

    def sum(self) -> TermSum:
        if self.peek() in ("", "≈", "=", "+", ";"):
            raise TermSyntaxError("empty side", self.pos)
        words = [Word(self.word())]
        while self.peek() == "+":
            self.pos += 1
            if self.peek() in ("", "≈", "=", "+", ";"):
                raise TermSyntaxError("empty word", self.pos)
            words.append(Word(self.word()))
        return TermSum(frozenset(words))


def parse_word(text: str) -> Word:
    p = _Parser(text)
    letters = p.word()
    if not p.at_end():
        raise TermSyntaxError("unexpected input", p.pos)
    return Word(letters)


def parse_sum(text: str) -> TermSum:
    p = _Parser(text)
    u = p.sum()
    if not p.at_end():
        raise TermSyntaxError("unexpected input", p.pos)
    return u


def _parse(text: str) -> tuple[Identity, frozenset[str] | None]:
    p = _Parser(text)
    lhs = p.sum()
    ch = p.peek()
    if ch not in ("≈", "="):
        raise TermSyntaxError("expected '≈' or '='", p.pos)
    p.pos += 1
    rhs = p.sum()
    optional = None
    if p.peek() == ";":
        p.pos += 1
        p.skip()
        if not p.text.startswith("optional", p.pos):
            raise TermSyntaxError("expected 'optional'", p.pos)
        p.pos += len("optional")
        names = []
        while not p.at_end():
            names.append(p.var())
        if not names:
            raise TermSyntaxError("expected at least one optional variable", p.pos)
        optional = frozenset(names)
    if not p.at_end():
        raise TermSyntaxError("unexpected input", p.pos)
    return Identity(lhs, rhs), optional


def parse(text: str) -> Identity | IdentityScheme:
    """Parse one identity, or a scheme when an `; optional ...` suffix is present."""
    ident, optional = _parse(text)
    if optional is None:
        return ident
    return IdentityScheme(ident, optional)


def parse_identity(text: str) -> Identity:
    ident, optional = _parse(text)
    if optional:
        raise TermSyntaxError("expected a plain identity, got a scheme")
    return ident


def parse_scheme(text: str) -> IdentityScheme:
    ident, optional = _parse(text)
    return IdentityScheme(ident, optional or frozenset())


def read_identity_file(text: str) -> list[Identity | IdentityScheme]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(parse(line))
        except TermSyntaxError as exc:
            raise TermSyntaxError(f"line {lineno}: {exc}") from None
    return out
