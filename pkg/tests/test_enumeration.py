import itertools

import numpy as np
import pytest

from aisemiring.algebra import FiniteAiSemiring, diamond_addition, validate
from aisemiring.enumeration import (
    EnumerationBudgetError,
    all_join_semilattices,
    census_diff,
    enumerate_order,
    enumerate_with_reduct,
    join_endomorphisms,
)
from aisemiring.structure import canonical_form


def _brute_semilattices(n):
    """Every commutative idempotent associative table, canonicalized by n! relabelings."""
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    for vals in itertools.product(range(n), repeat=len(cells)):
        T = [[i if i == j else None for j in range(n)] for i in range(n)]
        for (i, j), v in zip(cells, vals):
            T[i][j] = T[j][i] = v
        if all(T[T[x][y]][z] == T[x][T[y][z]] for x in range(n) for y in range(n) for z in range(n)):
            best = min(
                tuple(tuple(p[T[q[a]][q[b]]] for b in range(n)) for a in range(n))
                for p in itertools.permutations(range(n))
                for q in [sorted(range(n), key=lambda k: p[k])]
            )
            seen.add(best)
    return len(seen)


@pytest.mark.parametrize("n,count", [(1, 1), (2, 1), (3, 2), (4, 5)])
def test_join_semilattice_counts(n, count):
    assert len(all_join_semilattices(n)) == count


def test_semilattices_match_brute_force():
    assert _brute_semilattices(3) == len(all_join_semilattices(3)) == 2


def test_diamond_is_a_reduct():
    forms = [canonical_form(FiniteAiSemiring(4, t, [[1] * 4] * 4)) for t in all_join_semilattices(4)]
    diamond = canonical_form(FiniteAiSemiring(4, diamond_addition(), [[1] * 4] * 4))
    assert diamond in forms


def test_out_of_range():
    with pytest.raises(ValueError):
        all_join_semilattices(0)
    with pytest.raises(ValueError):
        enumerate_order(5, stretch=True)


def test_join_endomorphisms_by_definition():
    add0 = np.array(diamond_addition()) - 1
    maps = {tuple(f) for f in join_endomorphisms(add0).tolist()}
    brute = {
        f for f in itertools.product(range(4), repeat=4)
        if all(f[add0[a, b]] == add0[f[a], f[b]] for a in range(4) for b in range(4))
    }
    assert maps == brute


def test_small_censuses():
    assert enumerate_order(1).count == 1
    assert enumerate_order(2).count == 6
    assert enumerate_order(3).count == 61


def test_diamond_census(catalog):
    res = enumerate_with_reduct(diamond_addition())
    assert res.count == 93
    table1 = {canonical_form(e.algebra) for e in catalog.all_table1()}
    assert set(res.forms) == table1
    for rep in res.representatives:
        assert [list(r) for r in rep.add] == diamond_addition()


def test_chain_reduct(catalog):
    res = enumerate_with_reduct([[1, 1], [1, 2]])
    assert res.count == 6
    names = ["L_2", "R_2", "M_2", "D_2", "N_2", "T_2"]
    assert set(res.forms) == {canonical_form(catalog.algebra(n)) for n in names}


def test_order_four_requires_stretch():
    with pytest.raises(EnumerationBudgetError):
        enumerate_order(4)


def test_order_four_census():
    res = enumerate_order(4, stretch=True)
    assert res.count == 866
    assert sorted(res.per_reduct.values()) == sorted([58, 217, 93, 112, 386])
    assert len(set(res.forms)) == 866
    assert all(validate(a) == [] for a in res.representatives)


def test_deterministic():
    a = enumerate_order(3)
    b = enumerate_order(3)
    assert a.forms == b.forms
    assert a.forms == sorted(a.forms)


def test_parallel_matches_serial():
    assert enumerate_order(3, jobs=2).forms == enumerate_order(3).forms


def test_census_diff():
    res = enumerate_order(2)
    assert census_diff(res, 6) == []
    lines = census_diff(res, 7)
    assert lines[0] == "census mismatch found=6 expected=7"
    assert sum(line.startswith("form ") for line in lines) == 6


def test_bad_reduct():
    with pytest.raises(ValueError):
        enumerate_with_reduct([[1, 2], [1, 2]])
