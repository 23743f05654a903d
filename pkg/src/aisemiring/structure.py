"""Homomorphism, embedding and isomorphism search; congruences; canonical forms."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .algebra import (
    FiniteAiSemiring,
    Partition,
    direct_product,
    is_congruence,
    normalize_partition,
)


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ElementMap:
    source: FiniteAiSemiring
    target: FiniteAiSemiring
    image: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.image[x - 1]

    def is_injective(self) -> bool:
        return len(set(self.image)) == len(self.image)

    def is_surjective(self) -> bool:
        return set(self.image) == set(self.target.elements)

    def is_homomorphism(self) -> bool:
        return is_homomorphism(self.source, self.target, self.image)

    def __str__(self) -> str:
        return " ".join(f"{x}->{y}" for x, y in enumerate(self.image, 1))


def is_homomorphism(a: FiniteAiSemiring, b: FiniteAiSemiring, image: Sequence[int]) -> bool:
    f = np.asarray(image) - 1
    return bool(
        np.array_equal(f[a.add0], b.add0[f[:, None], f[None, :]])
        and np.array_equal(f[a.mul0], b.mul0[f[:, None], f[None, :]])
    )


def iter_homomorphisms(
    a: FiniteAiSemiring,
    b: FiniteAiSemiring,
    injective: bool = False,
    node_budget: int = 10**7,
) -> Iterator[ElementMap]:
    """Backtracking over images of 1..|a| in order, lexicographic in the image tuple.

    After each assignment every pair of assigned elements is checked: when the
    image of x+y (or xy) is already assigned it must agree, otherwise the value
    is forced for later.
    """
    n, m = a.order, b.order
    A, M = a.add0.tolist(), a.mul0.tolist()
    B, N = b.add0.tolist(), b.mul0.tolist()
    img = [-1] * n
    used = [False] * m
    nodes = 0

    def consistent(k: int) -> bool:
        # all constraints among elements 0..k, at least one of which is k
        fk = img[k]
        for j in range(k + 1):
            fj = img[j]
            for (x, y, fx, fy) in ((k, j, fk, fj), (j, k, fj, fk)):
                s = A[x][y]
                if s <= k and img[s] != B[fx][fy]:
                    return False
                p = M[x][y]
                if p <= k and img[p] != N[fx][fy]:
                    return False
        # constraints whose result index is k but operands are earlier
        for x in range(k):
            for y in range(k):
                if A[x][y] == k and B[img[x]][img[y]] != fk:
                    return False
                if M[x][y] == k and N[img[x]][img[y]] != fk:
                    return False
        return True

    def rec(k: int):
        nonlocal nodes
        if k == n:
            yield ElementMap(a, b, tuple(v + 1 for v in img))
            return
        for v in range(m):
            if injective and used[v]:
                continue
            nodes += 1
            if nodes > node_budget:
                raise SearchBudgetExceeded(f"homomorphism search exceeded {node_budget} nodes")
            img[k] = v
            if consistent(k):
                used[v] = True
                yield from rec(k + 1)
                used[v] = False
            img[k] = -1

    yield from rec(0)


def find_homomorphisms(a: FiniteAiSemiring, b: FiniteAiSemiring, **kw) -> list[ElementMap]:
    return list(iter_homomorphisms(a, b, **kw))


def find_embedding(a: FiniteAiSemiring, b: FiniteAiSemiring, **kw) -> ElementMap | None:
    if a.order > b.order:
        return None
    return next(iter_homomorphisms(a, b, injective=True, **kw), None)


def find_isomorphism(a: FiniteAiSemiring, b: FiniteAiSemiring) -> ElementMap | None:
    if a.order != b.order:
        return None
    return next(iter_homomorphisms(a, b, injective=True), None)


def is_isomorphic(a: FiniteAiSemiring, b: FiniteAiSemiring) -> bool:
    return a.order == b.order and canonical_form(a) == canonical_form(b)


def automorphisms(a: FiniteAiSemiring) -> list[ElementMap]:
    return list(iter_homomorphisms(a, a, injective=True))


# ----------------------------------------------------- relabel and dual

def relabel(a: FiniteAiSemiring, perm: Sequence[int], name: str | None = None) -> FiniteAiSemiring:
    """Element x of `a` becomes perm[x-1] (1-based permutation)."""
    p = np.asarray(perm) - 1
    if sorted(p.tolist()) != list(range(a.order)):
        raise ValueError(f"{list(perm)} is not a permutation of 1..{a.order}")
    q = np.argsort(p)
    add = p[a.add0[q[:, None], q[None, :]]]
    mul = p[a.mul0[q[:, None], q[None, :]]]
    return FiniteAiSemiring.from_zero_based(add, mul, name)


def dual(a: FiniteAiSemiring, name: str | None = None) -> FiniteAiSemiring:
    return FiniteAiSemiring(a.order, a.add, [list(r) for r in zip(*a.mul)], name)


# ------------------------------------------------------- canonical form

MAX_CANONICAL_ORDER = 6


@lru_cache(maxsize=None)
def _perm_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    P = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    Q = np.argsort(P, axis=1)
    return P, Q


def canonical_form(a: FiniteAiSemiring) -> bytes:
    """Lexicographically least (add, mul) encoding over all n! relabelings."""
    n = a.order
    if n > MAX_CANONICAL_ORDER:
        raise SearchBudgetExceeded(f"canonical form needs order <= {MAX_CANONICAL_ORDER}")
    P, Q = _perm_arrays(n)
    k = len(P)
    rows = np.arange(k)[:, None, None]
    qi = Q[:, :, None]
    qj = Q[:, None, :]
    add = P[rows, a.add0[qi, qj]].reshape(k, -1)
    mul = P[rows, a.mul0[qi, qj]].reshape(k, -1)
    enc = np.concatenate([add, mul], axis=1).astype(np.uint8)
    order = np.lexsort(enc.T[::-1])
    return bytes([n]) + enc[order[0]].tobytes()


def canonical_algebra(a: FiniteAiSemiring, name: str | None = None) -> FiniteAiSemiring:
    return algebra_from_canonical(canonical_form(a), name)


def algebra_from_canonical(form: bytes, name: str | None = None) -> FiniteAiSemiring:
    n = form[0]
    body = np.frombuffer(form[1:], dtype=np.uint8).astype(np.int64)
    return FiniteAiSemiring.from_zero_based(
        body[: n * n].reshape(n, n), body[n * n :].reshape(n, n), name
    )


# ------------------------------------------------------------ congruences

MAX_CONGRUENCE_ORDER = 6


def set_partitions(elements: Sequence[int]) -> Iterator[list[list[int]]]:
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for p in set_partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1 :]


def congruences(a: FiniteAiSemiring, max_order: int = MAX_CONGRUENCE_ORDER) -> list[Partition]:
    if a.order > max_order:
        raise SearchBudgetExceeded(f"congruence enumeration limited to order <= {max_order}")
    found = {
        normalize_partition(p, a.order)
        for p in set_partitions(list(a.elements))
        if is_congruence(a, p)
    }
    return sorted(found, key=lambda p: (-len(p), p))


def partition_from_relation(pairs, n: int) -> Partition:
    """Smallest partition containing the given pairs (the diagonal is implicit)."""
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x, y in pairs:
        parent[find(x)] = find(y)
    blocks: dict[int, list[int]] = {}
    for e in range(1, n + 1):
        blocks.setdefault(find(e), []).append(e)
    return normalize_partition(blocks.values(), n)


# ------------------------------------------------------ subdirect products

def product_of(factors: Sequence[FiniteAiSemiring]) -> FiniteAiSemiring:
    prod = factors[0]
    for f in factors[1:]:
        prod = direct_product(prod, f)
    return prod


def coordinates(label: int, orders: Sequence[int]) -> tuple[int, ...]:
    """Inverse of the mixed-radix labelling used by `direct_product`."""
    idx = label - 1
    out = []
    for m in reversed(orders):
        out.append(idx % m + 1)
        idx //= m
    return tuple(reversed(out))


def is_subdirect_embedding(
    a: FiniteAiSemiring, factors: Sequence[FiniteAiSemiring], **kw
) -> ElementMap | None:
    """First injective homomorphism into the product whose projections are all onto."""
    prod = product_of(factors)
    orders = [f.order for f in factors]
    for emb in iter_homomorphisms(a, prod, injective=True, **kw):
        coords = [coordinates(v, orders) for v in emb.image]
        if all({c[i] for c in coords} == set(range(1, orders[i] + 1)) for i in range(len(factors))):
            return emb
    return None


def projections_surjective(emb: ElementMap, factors: Sequence[FiniteAiSemiring]) -> bool:
    orders = [f.order for f in factors]
    coords = [coordinates(v, orders) for v in emb.image]
    return all({c[i] for c in coords} == set(range(1, orders[i] + 1)) for i in range(len(factors)))
