import pytest

from aisemiring.oracles import (
    EXACT_ORACLES,
    NECESSITY_ORACLES,
    NOT_COVERED,
    check_equivalence,
    check_necessity,
    check_s0,
    negated,
    oracle_s0,
    oracle_s2,
    oracle_s4,
    oracle_s41,
    oracle_s44,
    oracle_s46,
    oracle_s53,
    oracle_s57,
    oracle_s58,
    oracle_s59,
    oracle_s60,
)
from aisemiring.algebra import adjoin_zero
from aisemiring.satisfaction import satisfies
from aisemiring.terms import TermSum, UQPair, parse_word


def P(u, q):
    return UQPair(TermSum.of(*[parse_word(w) for w in u.split("+")]), parse_word(q))


# hand-checked single pairs -------------------------------------------------

def test_s0_examples(catalog):
    t2 = catalog.algebra("T_2")
    pair = P("xy", "xyz")
    assert oracle_s0(pair, t2) == satisfies(adjoin_zero(t2), pair.identity()).holds
    no_d = P("xz", "y")
    assert oracle_s0(no_d, t2) is False
    assert not satisfies(adjoin_zero(t2), no_d.identity()).holds


def test_s57_examples():
    assert oracle_s57(P("xy", "xy"))
    assert not oracle_s57(P("x", "x"))


def test_s53_examples():
    assert oracle_s53(P("xy", "y"))
    assert not oracle_s53(P("x", "x"))
    assert oracle_s53(P("xyz", "zyx")) is NOT_COVERED


def test_s58_examples():
    assert oracle_s58(P("xy", "xz"))
    assert not oracle_s58(P("x", "y"))


def test_s59_examples():
    assert oracle_s59(P("xyz", "yyyy"))
    assert not oracle_s59(P("xy", "xyz"))


def test_s60_examples():
    assert oracle_s60(P("xy", "yx"))
    assert not oracle_s60(P("x", "x"))
    assert not oracle_s60(P("xy+z", "xz"))


def test_s44_s46_examples():
    assert oracle_s44(P("xy", "yx"))
    assert not oracle_s44(P("xy", "x"))
    assert oracle_s46(P("xy", "xy"))
    assert not oracle_s46(P("yx", "xy"))


def test_s41_examples():
    assert oracle_s41(P("xy", "xy"))
    assert not oracle_s41(P("y", "xy"))


def test_s2_s4_examples():
    assert oracle_s2(P("xyz", "x"))
    assert not oracle_s2(P("x", "y"))
    assert oracle_s4(P("x+y", "x"))
    assert not oracle_s4(P("x", "y"))


def test_not_covered_has_no_truth_value():
    with pytest.raises(TypeError):
        bool(NOT_COVERED)


# harnesses -----------------------------------------------------------------

@pytest.mark.parametrize("key", list(EXACT_ORACLES))
def test_exact_oracles(catalog, corpus, key):
    name, fn = EXACT_ORACLES[key]
    rep = check_equivalence(fn, catalog.algebra(name), corpus, key)
    assert rep.passed, rep.lines()[:5]
    assert rep.summary() == f"equivalence: exact ({len(corpus)} pairs)"


@pytest.mark.parametrize("key", list(NECESSITY_ORACLES))
def test_necessity_oracles(catalog, corpus, key):
    name, fn = NECESSITY_ORACLES[key]
    rep = check_necessity(fn, catalog.algebra(name), corpus, key)
    assert rep.passed, rep.lines()[:5]


def test_s53_reports_uncovered(catalog, corpus):
    rep = check_necessity(oracle_s53, catalog.algebra("S_53"), corpus, "s53")
    assert rep.not_covered > 0 and "not-covered" in rep.summary()


def test_s0_all_small_bases(catalog, small_corpus):
    for name in catalog.derived_names():
        base = catalog.algebra(name)
        if base.order <= 3:
            assert check_s0(base, small_corpus).passed, name


def test_negated_oracle_is_caught(catalog, small_corpus):
    rep = check_necessity(negated(oracle_s57), catalog.algebra("S_57"), small_corpus)
    assert not rep.passed
    eq = check_equivalence(negated(oracle_s41), catalog.algebra("S_41"), small_corpus)
    assert len(eq.violations) == eq.checked


def test_empty_and_singleton_corpus(catalog):
    assert check_necessity(oracle_s57, catalog.algebra("S_57"), []).passed
    pair = P("xy", "xy")
    rep = check_equivalence(oracle_s41, catalog.algebra("S_41"), [pair])
    assert rep.passed and rep.checked == 1


def test_violation_line_format(catalog, small_corpus):
    rep = check_necessity(negated(oracle_s57), catalog.algebra("S_57"), small_corpus)
    line = rep.lines()[0]
    assert line.endswith("| satisfies=true oracle=false")
