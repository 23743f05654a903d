import pytest

from aisemiring.algebra import FiniteAiSemiring
from aisemiring.basis import (
    FB,
    NFB,
    ClaimFormatError,
    ClaimSet,
    completeness_evidence,
    countermodel_search,
    models_up_to,
    mutation_test,
    parse_claim,
    theorem_lines,
    theorem_report,
    verify_cross_claims,
    verify_soundness,
)
from aisemiring.satisfaction import satisfies
from aisemiring.terms import parse, parse_identity

TABLE1 = [f"S_(4,{k})" for k in range(388, 481)]


@pytest.fixture(scope="module")
def claims(catalog):
    return ClaimSet(catalog=catalog)


def test_parse_claim_basic():
    c = parse_claim("algebra S_4_471\nstatus fb\nsource printed-basis\nxy ≈ yx\n# note\nx^2 ≈ x^2 + xy\n")
    assert c.algebra_name == "S_(4,471)" and c.status == FB and len(c.schemes) == 2


def test_parse_claim_scheme_annotation():
    c = parse_claim("algebra S_(4,400)\nstatus fb\nxyz ≈ xyz + y ; optional x z\n")
    assert c.schemes[0].optional_vars == {"x", "z"}


@pytest.mark.parametrize(
    "text",
    [
        "status fb\nxy ≈ yx\n",
        "algebra S_(4,471)\nstatus maybe\n",
        "algebra S_(4,471)\nstatus fb\nxy ≈\n",
        "algebra S_(4,435)\nstatus nfb\nxy ≈ yx\n",
        "algebra S_(4,471)\nstatus fb\nerratum-reading x ≈ x\n",
        "algebra S_(4,471)\nstatus fb\ndual-of S_(4,424)\n",
    ],
)
def test_malformed_claims(text):
    with pytest.raises(ClaimFormatError):
        parse_claim(text)


def test_dual_of_reverses(claims):
    base = claims.get("S_(4,424)")
    dual = claims.get("S_(4,461)")
    assert [s.reversed() for s in base.schemes] == dual.schemes


def test_all_claims_load(claims):
    loaded = claims.all()
    assert len(loaded) == 93
    assert [c.algebra_name for c in loaded] == TABLE1
    assert [c.algebra_name for c in loaded if c.status == NFB] == ["S_(4,435)"]


def test_soundness_471(claims):
    rep = verify_soundness(claims.get("S_(4,471)"))
    assert rep.passed and len(rep.results) == 3


def test_empty_scheme_list_is_vacuous(catalog):
    c = parse_claim("algebra S_(4,388)\nstatus fb\n")
    assert verify_soundness(c, catalog).passed


def test_soundness_479_product_identity(catalog):
    assert satisfies(catalog.algebra("S_(4,479)"), parse("x1x2 + x3x4 ≈ x1x2x3x4")).holds


def test_printed_428_line_fails_and_corrected_reading_holds(claims):
    rep = verify_soundness(claims.get("S_(4,428)"))
    bad = [r for r in rep.results if not r.verdict.holds]
    assert len(bad) == 1
    assert bad[0].verdict.witness == {"x": 1, "y": 2, "z": 1}
    assert bad[0].erratum_verdict.holds
    assert rep.passed_with_errata and not rep.passed


def test_every_other_printed_scheme_holds(claims):
    failing = [c.algebra_name for c in claims.all() if not verify_soundness(c).passed]
    assert failing == ["S_(4,418)", "S_(4,428)"]  # 418 imports the dual of the 428 line


def test_cross_claims(claims):
    results = verify_cross_claims(claims)
    assert results and all(r.passed for r in results)
    listed = {(r.algebra, r.claim) for r in results}
    for alg, other in [("S_(4,393)", "S_(4,467)"), ("S_(4,397)", "S_(4,459)"), ("S_(4,392)", "S_(4,479)")]:
        assert (alg, f"basis-of {other}") in listed


def test_countermodel_none_for_basis_member(claims):
    schemes = claims.get("S_(4,471)").schemes
    assert countermodel_search(schemes, parse("x1 ≈ x1 + x2x3x4"), 4) is None


def test_countermodel_for_commutativity():
    m = countermodel_search([parse("xy ≈ yx")], parse_identity("xy ≈ x"), 2)
    assert m is not None and m.order <= 2
    assert satisfies(m, parse("xy ≈ yx")).holds and not satisfies(m, parse("xy ≈ x")).holds


def test_countermodel_bound():
    with pytest.raises(ValueError):
        countermodel_search([], parse_identity("x ≈ x"), 5)


def test_models_up_to_counts():
    assert len(models_up_to(3)) == 1 + 6 + 61


def test_completeness_471_order3(claims):
    rep = completeness_evidence(claims.get("S_(4,471)"), (3, 3, 3), 3)
    assert rep.passed
    assert "no countermodel of order <= 3" in rep.summary()
    assert "derivable" not in rep.summary()


def test_completeness_rejects_nfb(claims):
    with pytest.raises(ValueError):
        completeness_evidence(claims.get("S_(4,435)"))


def test_trivial_identities_never_flag(claims, small_corpus):
    rep = completeness_evidence(claims.get("S_(4,471)"), (2, 2, 2), 3, schemes=[])
    flagged = {str(i) for i, _ in rep.red_flags}
    trivial = {str(small_corpus.pair(k).identity()) for k in range(len(small_corpus)) if small_corpus.pair(k).is_trivial()}
    assert not flagged & trivial


def test_mutation_471(claims):
    results = mutation_test(claims.get("S_(4,471)"), (3, 3, 3), 3)
    assert len(results) == 3 and any(r.red_flags > 0 for r in results)


def test_theorem_report(claims):
    rows = theorem_report(claims)
    assert len(rows) == 93
    assert sum(r.status == "fb" for r in rows) == 92
    nfb = [r for r in rows if r.status == "nfb"]
    assert [r.algebra for r in nfb] == ["S_(4,435)"]
    assert nfb[0].structure == "zero roundtrip isomorphic"
    assert theorem_lines(rows)[-1].startswith("summary rows=93 finitely_based=92 nonfinitely_based=1")
