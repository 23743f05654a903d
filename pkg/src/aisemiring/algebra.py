"""Finite ai-semirings: representation, axiom validation and constructors.

Elements are labelled 1..n in every public interface. Tables are stored as
tuples of tuples of those labels; 0-based numpy copies are cached for the
evaluation engines.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class MalformedTableError(ValueError):
    """Raised for tables of the wrong shape or with out-of-range entries."""


class ClosureError(ValueError):
    pass


class NotACongruenceError(ValueError):
    pass


class NoZeroError(ValueError):
    pass


def _freeze(table, n: int, label: str) -> tuple[tuple[int, ...], ...]:
    try:
        rows = [tuple(int(v) for v in row) for row in table]
    except TypeError as exc:
        raise MalformedTableError(f"{label} table is not a 2-d array") from exc
    if len(rows) != n or any(len(r) != n for r in rows):
        raise MalformedTableError(f"{label} table must be {n}x{n}")
    for i, r in enumerate(rows, 1):
        for j, v in enumerate(r, 1):
            if not 1 <= v <= n:
                raise MalformedTableError(f"{label}({i},{j}) = {v} is outside 1..{n}")
    return tuple(rows)


@dataclass(frozen=True)
class FiniteAiSemiring:
    order: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise MalformedTableError(f"order must be a positive integer, got {self.order!r}")
        object.__setattr__(self, "add", _freeze(self.add, self.order, "add"))
        object.__setattr__(self, "mul", _freeze(self.mul, self.order, "mul"))

    @classmethod
    def from_tables(cls, add, mul, name: str | None = None) -> "FiniteAiSemiring":
        return cls(len(add), add, mul, name)

    @classmethod
    def from_zero_based(cls, add, mul, name: str | None = None) -> "FiniteAiSemiring":
        add = np.asarray(add) + 1
        mul = np.asarray(mul) + 1
        return cls(len(add), add.tolist(), mul.tolist(), name)

    def named(self, name: str | None) -> "FiniteAiSemiring":
        return FiniteAiSemiring(self.order, self.add, self.mul, name)

    @property
    def elements(self) -> range:
        return range(1, self.order + 1)

    def plus(self, a: int, b: int) -> int:
        return self.add[a - 1][b - 1]

    def times(self, a: int, b: int) -> int:
        return self.mul[a - 1][b - 1]

    # 0-based numpy views; computed lazily, never mutated
    @cached_property
    def add0(self) -> np.ndarray:
        a = np.array(self.add, dtype=np.int64) - 1
        a.setflags(write=False)
        return a

    @cached_property
    def mul0(self) -> np.ndarray:
        m = np.array(self.mul, dtype=np.int64) - 1
        m.setflags(write=False)
        return m

    def __str__(self) -> str:
        return format_algebra(self)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<FiniteAiSemiring{label} order={self.order}>"


# ------------------------------------------------------------- validation

@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.axiom} fails at {self.witness}"


AXIOMS = (
    "add-idempotent",
    "add-commutative",
    "add-associative",
    "mul-associative",
    "left-distributive",
    "right-distributive",
)


def validate(alg: FiniteAiSemiring, first_only: bool = False) -> list[Violation]:
    """All axiom violations, each with a witness; empty list iff `alg` is an ai-semiring.

    Structural problems never reach this point: the constructor raises
    MalformedTableError for them.
    """
    A, M = alg.add0, alg.mul0
    n = alg.order
    out: list[Violation] = []

    def report(axiom: str, bad: np.ndarray):
        for idx in np.argwhere(bad):
            out.append(Violation(axiom, tuple(int(i) + 1 for i in idx)))
            if first_only:
                break

    r = np.arange(n)
    report("add-idempotent", (A[r, r] != r)[:, None])
    report("add-commutative", A != A.T)
    x, y, z = np.meshgrid(r, r, r, indexing="ij")
    report("add-associative", A[A[x, y], z] != A[x, A[y, z]])
    report("mul-associative", M[M[x, y], z] != M[x, M[y, z]])
    report("left-distributive", M[x, A[y, z]] != A[M[x, y], M[x, z]])
    report("right-distributive", M[A[y, z], x] != A[M[y, x], M[z, x]])
    # the idempotency witness is a single element
    return [
        Violation(v.axiom, v.witness[:1]) if v.axiom == "add-idempotent" else v
        for v in out
    ]


def is_valid(alg: FiniteAiSemiring) -> bool:
    return not validate(alg, first_only=True)


# --------------------------------------------------------- additive order

@dataclass(frozen=True)
class AdditiveOrder:
    leq: tuple[tuple[bool, ...], ...]

    def __call__(self, x: int, y: int) -> bool:
        return self.leq[x - 1][y - 1]

    def pairs(self) -> list[tuple[int, int]]:
        n = len(self.leq)
        return [(x, y) for x in range(1, n + 1) for y in range(1, n + 1) if self.leq[x - 1][y - 1]]

    def top(self) -> int:
        n = len(self.leq)
        for y in range(1, n + 1):
            if all(self(x, y) for x in range(1, n + 1)):
                return y
        raise ValueError("no top element")

    def bottom(self) -> int | None:
        n = len(self.leq)
        for x in range(1, n + 1):
            if all(self(x, y) for y in range(1, n + 1)):
                return x
        return None


def additive_order(alg: FiniteAiSemiring) -> AdditiveOrder:
    return AdditiveOrder(
        tuple(tuple(alg.plus(x, y) == y for y in alg.elements) for x in alg.elements)
    )


def join_table_from_order(leq: Sequence[Sequence[bool]]) -> list[list[int]]:
    """Build the join (addition) table of a finite poset that has all binary joins."""
    n = len(leq)
    table = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            ubs = [c for c in range(n) if leq[a][c] and leq[b][c]]
            least = [c for c in ubs if all(leq[c][d] for d in ubs)]
            if len(least) != 1:
                raise ValueError(f"elements {a + 1} and {b + 1} have no join")
            table[a][b] = least[0] + 1
    return table


def diamond_addition() -> list[list[int]]:
    """Addition of the 4-element quasi-antichain: 2 bottom, 3 and 4 incomparable, 1 top."""
    covers = {(2, 3), (2, 4), (3, 1), (4, 1)}
    leq = [[False] * 4 for _ in range(4)]
    for a in range(1, 5):
        leq[a - 1][a - 1] = True
    for a, b in covers:
        leq[a - 1][b - 1] = True
    # transitive closure
    for k, i, j in itertools.product(range(4), repeat=3):
        if leq[i][k] and leq[k][j]:
            leq[i][j] = True
    return join_table_from_order(leq)


# ----------------------------------------------------------- constructors

def subalgebra(alg: FiniteAiSemiring, subset: Iterable[int], name: str | None = None) -> FiniteAiSemiring:
    """Restrict to a closed subset; elements are relabelled 1..k in increasing order."""
    elems = sorted(set(subset))
    if not elems:
        raise ValueError("subset must be nonempty")
    for e in elems:
        if not 1 <= e <= alg.order:
            raise ValueError(f"element {e} is not in 1..{alg.order}")
    index = {e: i + 1 for i, e in enumerate(elems)}
    for a in elems:
        for b in elems:
            for op, f in (("+", alg.plus), ("*", alg.times)):
                if f(a, b) not in index:
                    raise ClosureError(f"{a} {op} {b} = {f(a, b)} leaves the subset {elems}")
    add = [[index[alg.plus(a, b)] for b in elems] for a in elems]
    mul = [[index[alg.times(a, b)] for b in elems] for a in elems]
    return FiniteAiSemiring(len(elems), add, mul, name)


def closure(alg: FiniteAiSemiring, generators: Iterable[int]) -> frozenset[int]:
    s = set(generators)
    while True:
        new = {f(a, b) for a in s for b in s for f in (alg.plus, alg.times)} - s
        if not new:
            return frozenset(s)
        s |= new


Partition = tuple[tuple[int, ...], ...]


def normalize_partition(blocks: Iterable[Iterable[int]], n: int) -> Partition:
    """Sort blocks by least element; check that they partition 1..n."""
    bl = [tuple(sorted(set(b))) for b in blocks]
    bl = [b for b in bl if b]
    seen = sorted(e for b in bl for e in b)
    if seen != list(range(1, n + 1)):
        raise ValueError(f"blocks {bl} do not partition 1..{n}")
    return tuple(sorted(bl))


def block_index(partition: Partition, n: int) -> list[int]:
    """0-based block number for each element 1..n."""
    idx = [0] * n
    for k, b in enumerate(partition):
        for e in b:
            idx[e - 1] = k
    return idx


def diagonal(n: int) -> Partition:
    return tuple((i,) for i in range(1, n + 1))


def is_congruence(alg: FiniteAiSemiring, partition: Iterable[Iterable[int]]) -> bool:
    part = normalize_partition(partition, alg.order)
    blk = np.array(block_index(part, alg.order))
    # a ~ b implies a+c ~ b+c and ac ~ bc and ca ~ cb; with transitivity this
    # gives full compatibility
    same = blk[:, None] == blk[None, :]
    for T in (alg.add0, alg.mul0):
        left = blk[T]          # block of a*c, indexed [a, c]
        right = blk[T.T]       # block of c*a, indexed [a, c]
        for img in (left, right):
            # rows a, b in the same block must have the same image blocks
            agree = (img[:, None, :] == img[None, :, :]).all(axis=2)
            if np.any(same & ~agree):
                return False
    return True


def quotient(alg: FiniteAiSemiring, partition: Iterable[Iterable[int]], name: str | None = None) -> FiniteAiSemiring:
    """Block algebra; block k is the one containing the k-th smallest representative."""
    part = normalize_partition(partition, alg.order)
    if not is_congruence(alg, part):
        raise NotACongruenceError(f"{part} is not a congruence of {alg.name or 'the algebra'}")
    blk = block_index(part, alg.order)
    reps = [b[0] for b in part]
    add = [[blk[alg.plus(a, b) - 1] + 1 for b in reps] for a in reps]
    mul = [[blk[alg.times(a, b) - 1] + 1 for b in reps] for a in reps]
    return FiniteAiSemiring(len(part), add, mul, name)


def direct_product(a: FiniteAiSemiring, b: FiniteAiSemiring, name: str | None = None) -> FiniteAiSemiring:
    """Pair (i, j) gets label (i-1)*|b| + j."""
    m = b.order

    def code(i, j):
        return (i - 1) * m + j

    pairs = [(i, j) for i in a.elements for j in b.elements]
    add = [[code(a.plus(p[0], q[0]), b.plus(p[1], q[1])) for q in pairs] for p in pairs]
    mul = [[code(a.times(p[0], q[0]), b.times(p[1], q[1])) for q in pairs] for p in pairs]
    return FiniteAiSemiring(len(pairs), add, mul, name)


def product_coordinates(a_order: int, b_order: int, label: int) -> tuple[int, int]:
    return ((label - 1) // b_order + 1, (label - 1) % b_order + 1)


def power(alg: FiniteAiSemiring, k: int, name: str | None = None) -> FiniteAiSemiring:
    out = alg
    for _ in range(k - 1):
        out = direct_product(out, alg)
    return out.named(name)


def adjoin_zero(alg: FiniteAiSemiring, name: str | None = None) -> FiniteAiSemiring:
    """The new element 0 gets label n+1."""
    n = alg.order
    z = n + 1
    add = [list(r) + [i + 1] for i, r in enumerate(alg.add)] + [list(range(1, n + 2))]
    mul = [list(r) + [z] for r in alg.mul] + [[z] * (n + 1)]
    return FiniteAiSemiring(n + 1, add, mul, name)


def zero_elements(alg: FiniteAiSemiring) -> list[int]:
    """Elements that are both an additive identity and a multiplicative zero."""
    return [
        e for e in alg.elements
        if all(alg.plus(e, x) == x and alg.times(e, x) == e and alg.times(x, e) == e for x in alg.elements)
    ]


def strip_zero(alg: FiniteAiSemiring, name: str | None = None) -> FiniteAiSemiring:
    zs = zero_elements(alg)
    if not zs:
        raise NoZeroError(f"{alg.name or 'algebra'} has no element that is both bottom and zero")
    if alg.order == 1:
        raise ClosureError("removing the zero of a one-element algebra leaves nothing")
    return subalgebra(alg, [e for e in alg.elements if e != zs[0]], name)


# ---------------------------------------------------------- text format

class AlgebraFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def format_algebra(alg: FiniteAiSemiring) -> str:
    lines = []
    if alg.name is not None:
        lines.append(f"name {alg.name}")
    lines.append(f"order {alg.order}")
    lines.append("add:")
    lines.extend(" ".join(map(str, r)) for r in alg.add)
    lines.append("mul:")
    lines.extend(" ".join(map(str, r)) for r in alg.mul)
    return "\n".join(lines) + "\n"


def parse_algebra(text: str) -> FiniteAiSemiring:
    name = None
    order = None
    tables: dict[str, list[list[int]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("name "):
            name = line[5:].strip()
            current = None
        elif line.startswith("order"):
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit():
                raise AlgebraFormatError("expected 'order <n>'", lineno)
            order = int(parts[1])
            current = None
        elif line in ("add:", "mul:"):
            current = line[:-1]
            if current in tables:
                raise AlgebraFormatError(f"duplicate {line}", lineno)
            tables[current] = []
        elif current is not None:
            try:
                tables[current].append([int(t) for t in line.split()])
            except ValueError:
                raise AlgebraFormatError(f"bad table row {line!r}", lineno) from None
        else:
            raise AlgebraFormatError(f"unexpected line {line!r}", lineno)
    if order is None:
        raise AlgebraFormatError("missing 'order'")
    for key in ("add", "mul"):
        if key not in tables:
            raise AlgebraFormatError(f"missing '{key}:' table")
    return FiniteAiSemiring(order, tables["add"], tables["mul"], name)


def read_algebra(path) -> FiniteAiSemiring:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


def write_algebra(alg: FiniteAiSemiring, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_algebra(alg))
