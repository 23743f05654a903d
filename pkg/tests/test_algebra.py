import itertools

import pytest
from hypothesis import given, settings, strategies as st

from aisemiring.algebra import (
    AlgebraFormatError,
    ClosureError,
    FiniteAiSemiring,
    MalformedTableError,
    NoZeroError,
    NotACongruenceError,
    additive_order,
    adjoin_zero,
    diagonal,
    diamond_addition,
    direct_product,
    format_algebra,
    is_congruence,
    join_table_from_order,
    parse_algebra,
    quotient,
    strip_zero,
    subalgebra,
    validate,
)
from aisemiring.enumeration import enumerate_order
from aisemiring.structure import find_isomorphism, is_isomorphic, set_partitions

ONE = FiniteAiSemiring(1, [[1]], [[1]])


def test_388_valid(catalog):
    alg = catalog.algebra("S_(4,388)")
    assert all(v == 1 for row in alg.mul for v in row)
    assert validate(alg) == []


def test_order_one_valid():
    assert validate(ONE) == []


def test_broken_distributivity_reported(catalog):
    base = catalog.algebra("S_(4,435)")
    mul = [list(r) for r in base.mul]
    mul[2][3] = 4  # (3,4) entry; 1 and 3 both leave a valid algebra
    bad = FiniteAiSemiring(4, base.add, mul)
    names = {v.axiom for v in validate(bad)}
    assert names & {"left-distributive", "right-distributive"}
    v = next(v for v in validate(bad) if "distributive" in v.axiom)
    assert len(v.witness) == 3


def _brute_violations(alg):
    n = alg.order
    P, T = alg.plus, alg.times
    bad = set()
    for x, y, z in itertools.product(range(1, n + 1), repeat=3):
        if P(x, x) != x:
            bad.add("add-idempotent")
        if P(x, y) != P(y, x):
            bad.add("add-commutative")
        if P(P(x, y), z) != P(x, P(y, z)):
            bad.add("add-associative")
        if T(T(x, y), z) != T(x, T(y, z)):
            bad.add("mul-associative")
        if T(x, P(y, z)) != P(T(x, y), T(x, z)):
            bad.add("left-distributive")
        if T(P(y, z), x) != P(T(y, x), T(z, x)):
            bad.add("right-distributive")
    return bad


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=9, max_size=9), st.lists(st.integers(1, 3), min_size=9, max_size=9))
def test_validate_matches_triple_scan(a, m):
    alg = FiniteAiSemiring(3, [a[0:3], a[3:6], a[6:9]], [m[0:3], m[3:6], m[6:9]])
    assert {v.axiom for v in validate(alg)} == _brute_violations(alg)


@pytest.mark.parametrize("add,mul", [([[1, 1]], [[1]]), ([[1, 2], [2, 3]], [[1, 1], [1, 1]]), ([[0]], [[1]])])
def test_malformed_is_distinct(add, mul):
    with pytest.raises(MalformedTableError):
        FiniteAiSemiring(len(add), add, mul)


def test_additive_order_diamond(catalog):
    o = additive_order(catalog.algebra("S_(4,388)"))
    for lo, hi in [(2, 3), (3, 1), (2, 4), (4, 1), (2, 1)]:
        assert o(lo, hi)
    assert not o(3, 4) and not o(4, 3)
    assert o.top() == 1 and o.bottom() == 2


def test_additive_order_trivial_and_chain():
    assert additive_order(ONE).pairs() == [(1, 1)]
    chain = [[i <= j for j in range(3)] for i in range(3)]
    add = join_table_from_order(chain)
    alg = FiniteAiSemiring(3, add, [[1] * 3] * 3)
    o = additive_order(alg)
    assert all(o(i, j) or o(j, i) for i in range(1, 4) for j in range(1, 4))


def test_diamond_table():
    assert diamond_addition() == [[1, 1, 1, 1], [1, 2, 3, 4], [1, 3, 3, 1], [1, 4, 1, 4]]


def test_subalgebra(catalog):
    s44 = subalgebra(catalog.algebra("S_(4,447)"), {1, 2, 4})
    assert s44.order == 3 and validate(s44) == []
    full = catalog.algebra("S_(4,447)")
    assert subalgebra(full, {1, 2, 3, 4}).mul == full.mul
    n2 = subalgebra(catalog.algebra("S_(4,471)"), {2, 3})
    assert n2.order == 2
    bottom = additive_order(n2).bottom()
    assert all(v == bottom for row in n2.mul for v in row)


def test_subalgebra_not_closed(catalog):
    with pytest.raises(ClosureError) as exc:
        subalgebra(catalog.algebra("S_(4,388)"), {2, 3})
    assert "1" in str(exc.value)


def test_congruences(catalog):
    assert is_congruence(catalog.algebra("S_(4,424)"), [[1, 3], [2], [4]])
    assert is_congruence(catalog.algebra("S_(4,453)"), [[1, 4], [2], [3]])
    for name in ("S_(4,435)", "S_(4,401)"):
        assert is_congruence(catalog.algebra(name), diagonal(4))


def _naive_congruence(alg, part):
    block = {x: i for i, b in enumerate(part) for x in b}
    for a, b, c, d in itertools.product(alg.elements, repeat=4):
        if block[a] == block[b] and block[c] == block[d]:
            if block[alg.plus(a, c)] != block[alg.plus(b, d)] or block[alg.times(a, c)] != block[alg.times(b, d)]:
                return False
    return True


def test_is_congruence_matches_naive(catalog):
    for name in ("S_(4,424)", "S_(4,401)", "S_(4,435)", "S_(4,474)"):
        alg = catalog.algebra(name)
        for p in set_partitions(list(alg.elements)):
            assert is_congruence(alg, p) == _naive_congruence(alg, p)


def test_quotients(catalog):
    q = quotient(catalog.algebra("S_(4,424)"), [[1, 3], [2], [4]])
    assert q.order == 3 and validate(q) == []
    a = catalog.algebra("S_(4,459)")
    assert is_isomorphic(quotient(a, diagonal(4)), a)
    with pytest.raises(NotACongruenceError):
        quotient(catalog.algebra("S_(4,435)"), [[1, 2], [3], [4]])


def test_direct_product(catalog):
    a = catalog.algebra("S_(4,440)")
    sq = direct_product(a, a)
    assert sq.order == 16 and validate(sq) == []
    assert is_isomorphic(direct_product(a, ONE), a)


def test_zero_roundtrips(catalog):
    a = catalog.algebra("S_(4,430)")
    assert find_isomorphism(adjoin_zero(strip_zero(a)), a) is not None
    z = adjoin_zero(ONE)
    assert z.order == 2 and validate(z) == []
    assert validate(adjoin_zero(catalog.algebra("S_57"))) == []
    s7 = strip_zero(catalog.algebra("S_(4,435)"))
    assert s7.order == 3
    assert strip_zero(catalog.algebra("S_(4,434)")).order == 3


def test_strip_zero_without_zero(catalog):
    with pytest.raises(NoZeroError):
        strip_zero(catalog.algebra("S_(4,388)"))


def test_strip_adjoin_identity_on_small_algebras():
    for n in (1, 2, 3):
        for a in enumerate_order(n).representatives:
            assert is_isomorphic(strip_zero(adjoin_zero(a)), a)


def test_quotients_validate(catalog):
    from aisemiring.structure import congruences

    for name in ("S_(4,401)", "S_(4,426)", "S_(4,474)"):
        a = catalog.algebra(name)
        for p in congruences(a):
            assert validate(quotient(a, p)) == []


def test_text_roundtrip(catalog):
    for entry in catalog.all_table1()[:10]:
        text = format_algebra(entry.algebra)
        back = parse_algebra(text)
        assert format_algebra(back) == text


@pytest.mark.parametrize("text", ["add:\n1\nmul:\n1\n", "order 1\nadd:\n1\n", "order x\n", "order 1\nadd:\nfoo\nmul:\n1\n"])
def test_text_errors(text):
    with pytest.raises((AlgebraFormatError, MalformedTableError)):
        parse_algebra(text)
