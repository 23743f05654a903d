"""Census of small ai-semirings up to isomorphism.

For a fixed addition, left distributivity says every row x ↦ (y ↦ xy) is a
join-endomorphism, and right distributivity says the row of y+z is the
pointwise join of the rows of y and z. The search therefore picks whole rows
from the precomputed endomorphisms, in element order, and prunes with every
associativity and right-distributivity instance whose rows are already fixed.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import FiniteAiSemiring
from .structure import canonical_form

MAX_ORDER = 4


class EnumerationBudgetError(RuntimeError):
    pass


def _table_key(T: np.ndarray) -> bytes:
    return T.astype(np.uint8).tobytes()


def _relabel0(T: np.ndarray, p: np.ndarray) -> np.ndarray:
    q = np.argsort(p)
    return p[T[q[:, None], q[None, :]]]


def _canonical_semilattice(T: np.ndarray) -> np.ndarray:
    n = len(T)
    best = None
    for p in itertools.permutations(range(n)):
        R = _relabel0(T, np.array(p))
        if best is None or _table_key(R) < _table_key(best):
            best = R
    return best


def all_join_semilattices(n: int) -> list[list[list[int]]]:
    """Addition tables (1-based) of all n-element join-semilattices up to isomorphism."""
    if not 1 <= n <= MAX_ORDER + 1:
        raise ValueError(f"order {n} outside 1..{MAX_ORDER + 1}")
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen: dict[bytes, np.ndarray] = {}
    r = np.arange(n)
    x, y, z = np.meshgrid(r, r, r, indexing="ij")
    for values in itertools.product(range(n), repeat=len(cells)):
        T = np.diag(r).astype(np.int64)
        for (i, j), v in zip(cells, values):
            T[i, j] = T[j, i] = v
        if np.array_equal(T[T[x, y], z], T[x, T[y, z]]):
            C = _canonical_semilattice(T)
            seen.setdefault(_table_key(C), C)
    return [(seen[k] + 1).tolist() for k in sorted(seen)]


def join_endomorphisms(add0: np.ndarray) -> np.ndarray:
    """All maps f with f(a+b) = f(a)+f(b), as rows of an array, lexicographic."""
    n = len(add0)
    F = np.array(list(itertools.product(range(n), repeat=n)), dtype=np.int64)
    ok = np.ones(len(F), dtype=bool)
    for a in range(n):
        for b in range(n):
            ok &= F[:, add0[a, b]] == add0[F[:, a], F[:, b]]
    return F[ok]


def additive_automorphisms(add0: np.ndarray) -> list[np.ndarray]:
    n = len(add0)
    out = []
    for p in itertools.permutations(range(n)):
        p = np.array(p)
        if np.array_equal(_relabel0(add0, p), add0):
            out.append(p)
    return out


def _search_multiplications(add0: np.ndarray) -> list[np.ndarray]:
    n = len(add0)
    A = add0.tolist()
    endos = [tuple(f) for f in join_endomorphisms(add0).tolist()]
    rows: list[tuple[int, ...] | None] = [None] * n
    found: list[np.ndarray] = []

    def ok(k: int) -> bool:
        assigned = [i for i in range(n) if rows[i] is not None]
        # right distributivity: row(y+z) = row(y) v row(z)
        for y in assigned:
            for z in assigned:
                s = A[y][z]
                if rows[s] is not None and (y == k or z == k or s == k):
                    ry, rz, rs = rows[y], rows[z], rows[s]
                    for c in range(n):
                        if rs[c] != A[ry[c]][rz[c]]:
                            return False
        # associativity: (xy)z = x(yz) once rows x, y and xy are known
        for x in assigned:
            rx = rows[x]
            for y in assigned:
                xy = rx[y]
                rxy = rows[xy]
                if rxy is None or k not in (x, y, xy):
                    continue
                ry = rows[y]
                for z in range(n):
                    if rxy[z] != rx[ry[z]]:
                        return False
        return True

    def rec(k: int):
        if k == n:
            found.append(np.array(rows, dtype=np.int64))
            return
        for f in endos:
            rows[k] = f
            if ok(k):
                rec(k + 1)
        rows[k] = None

    rec(0)
    return found


@dataclass
class EnumerationResult:
    additive_reduct: tuple[tuple[int, ...], ...]
    representatives: list[FiniteAiSemiring]
    forms: list[bytes] = field(default_factory=list)
    per_reduct: dict[tuple, int] = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.representatives)


@lru_cache(maxsize=None)
def _enumerate_cached(add_key: tuple) -> EnumerationResult:
    add0 = np.array(add_key, dtype=np.int64) - 1
    muls = _search_multiplications(add0)
    auts = additive_automorphisms(add0)
    reps: dict[bytes, np.ndarray] = {}
    for M in muls:
        best = min((_relabel0(M, p) for p in auts), key=_table_key)
        reps.setdefault(_table_key(best), best)
    algebras = [
        FiniteAiSemiring.from_zero_based(add0, reps[k]) for k in sorted(reps)
    ]
    forms = [canonical_form(a) for a in algebras]
    if len(set(forms)) != len(forms):
        raise AssertionError("automorphism dedup left isomorphic duplicates")
    return EnumerationResult(add_key, algebras, forms, {add_key: len(algebras)})


def enumerate_with_reduct(add_table) -> EnumerationResult:
    """All multiplications over a fixed addition, one per orbit of its automorphisms.

    Representatives keep the labels of `add_table`; each is the least
    multiplication table in its orbit.
    """
    key = tuple(tuple(int(v) for v in r) for r in add_table)
    add0 = np.array(key) - 1
    n = len(key)
    r = np.arange(n)
    x, y, z = np.meshgrid(r, r, r, indexing="ij")
    if not (
        np.array_equal(add0, add0.T)
        and np.array_equal(add0[r, r], r)
        and np.array_equal(add0[add0[x, y], z], add0[x, add0[y, z]])
    ):
        raise ValueError("addition table is not a join-semilattice")
    return _enumerate_cached(key)


def _worker(add_key):
    return _enumerate_cached(add_key)


def enumerate_order(n: int, stretch: bool = False, jobs: int = 1) -> EnumerationResult:
    if n > MAX_ORDER:
        raise ValueError(f"orders above {MAX_ORDER} are not supported")
    if n == MAX_ORDER and not stretch:
        raise EnumerationBudgetError("the full order-4 census needs the stretch flag")
    reducts = [tuple(tuple(r) for r in t) for t in all_join_semilattices(n)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_worker, reducts))
    else:
        parts = [_enumerate_cached(k) for k in reducts]
    pairs = []
    per = {}
    for k, res in zip(reducts, parts):
        per[k] = res.count
        pairs.extend(zip(res.forms, res.representatives))
    pairs.sort(key=lambda p: p[0])
    forms = [f for f, _ in pairs]
    if len(set(forms)) != len(forms):
        raise AssertionError("two reducts produced isomorphic algebras")
    return EnumerationResult((), [a for _, a in pairs], forms, per)


def census_diff(result: EnumerationResult, expected_count: int) -> list[str]:
    """Line records for a census mismatch: per-reduct counts then every form."""
    if result.count == expected_count:
        return []
    lines = [f"census mismatch found={result.count} expected={expected_count}"]
    for k, c in result.per_reduct.items():
        lines.append(f"reduct add={';'.join(''.join(map(str, r)) for r in k)} count={c}")
    lines += [f"form {f.hex()}" for f in result.forms]
    return lines
