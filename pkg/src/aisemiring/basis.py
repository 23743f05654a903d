"""Claimed equational bases: soundness, cross-satisfaction and finite countermodel evidence.

Completeness here is evidence only: "no countermodel of order <= k" means
no ai-semiring of order at most k satisfies the basis while failing a corpus
identity of the algebra. It is not a derivability proof.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .algebra import FiniteAiSemiring, adjoin_zero, strip_zero
from .catalog import Catalog, default_catalog, normalize_name
from .enumeration import enumerate_order
from .satisfaction import (
    CorpusEvaluator,
    Verdict,
    build_corpus,
    satisfies,
    satisfies_scheme,
)
from .structure import canonical_form, find_isomorphism
from .terms import Identity, IdentityScheme, TermSyntaxError, format_scheme, parse


class ClaimFormatError(ValueError):
    pass


FB, NFB = "finitely_based", "nonfinitely_based"


@dataclass
class BasisClaim:
    algebra_name: str
    status: str
    source: str
    schemes: list[IdentityScheme] = field(default_factory=list)
    # index into `schemes` -> reading used in place of an evidently misprinted scheme
    errata: dict[int, IdentityScheme] = field(default_factory=dict)

    @property
    def finitely_based(self) -> bool:
        return self.status == FB

    def corrected_schemes(self) -> list[IdentityScheme]:
        return [self.errata.get(i, s) for i, s in enumerate(self.schemes)]

    def without(self, index: int) -> "BasisClaim":
        schemes = [s for i, s in enumerate(self.schemes) if i != index]
        errata = {(i if i < index else i - 1): e for i, e in self.errata.items() if i != index}
        return BasisClaim(self.algebra_name, self.status, self.source, schemes, errata)


def _as_scheme(obj) -> IdentityScheme:
    return obj if isinstance(obj, IdentityScheme) else IdentityScheme(obj, frozenset())


def parse_claim(text: str, resolver=None) -> BasisClaim:
    """Claim file: `algebra`, `status fb|nfb`, `source` headers, then one scheme per line.

    `dual-of NAME` imports the word-reversed schemes of another claim and
    `basis-of NAME` imports them unchanged; both need `resolver(name)`.
    `erratum-reading IDENTITY` attaches a corrected reading to the previous scheme.
    """
    name = status = source = None
    schemes: list[IdentityScheme] = []
    errata: dict[int, IdentityScheme] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if key == "algebra":
                name = normalize_name(rest)
            elif key == "status":
                if rest not in ("fb", "nfb"):
                    raise ClaimFormatError(f"line {lineno}: status must be fb or nfb")
                status = FB if rest == "fb" else NFB
            elif key == "source":
                source = rest
            elif key in ("dual-of", "basis-of"):
                if resolver is None:
                    raise ClaimFormatError(f"line {lineno}: {key} needs a claim resolver")
                other = resolver(normalize_name(rest))
                offset = len(schemes)
                flip = key == "dual-of"
                schemes += [s.reversed() if flip else s for s in other.schemes]
                for i, e in other.errata.items():
                    errata[offset + i] = e.reversed() if flip else e
            elif key == "erratum-reading":
                if not schemes:
                    raise ClaimFormatError(f"line {lineno}: erratum before any scheme")
                errata[len(schemes) - 1] = _as_scheme(parse(rest))
            else:
                schemes.append(_as_scheme(parse(line)))
        except TermSyntaxError as exc:
            raise ClaimFormatError(f"line {lineno}: {exc}") from None
    if name is None or status is None:
        raise ClaimFormatError("claim needs 'algebra' and 'status' headers")
    if status == NFB and schemes:
        raise ClaimFormatError("a nonfinitely based claim carries no schemes")
    return BasisClaim(name, status, source or "", schemes, errata)


class ClaimSet:
    def __init__(self, claims_dir: str | Path | None = None, catalog: Catalog | None = None):
        self.catalog = catalog or default_catalog()
        self.dir = Path(claims_dir) if claims_dir else self.catalog.data_dir / "claims"
        self._cache: dict[str, BasisClaim] = {}
        self._loading: set[str] = set()

    def path_for(self, name: str) -> Path:
        k = re.search(r"(\d+)\)$", name)
        stem = f"S_4_{k.group(1)}" if k else name
        return self.dir / f"{stem}.basis"

    def get(self, name: str) -> BasisClaim:
        name = normalize_name(name)
        if name in self._cache:
            return self._cache[name]
        if name in self._loading:
            raise ClaimFormatError(f"claim cycle through {name}")
        path = self.path_for(name)
        if not path.exists():
            raise KeyError(name)
        self._loading.add(name)
        try:
            claim = parse_claim(path.read_text(encoding="utf-8"), self.get)
        finally:
            self._loading.discard(name)
        self._cache[name] = claim
        return claim

    def load_file(self, path: str | Path) -> BasisClaim:
        return parse_claim(Path(path).read_text(encoding="utf-8"), self.get)

    def all(self) -> list[BasisClaim]:
        return [self.get(n) for n in self.catalog.table1_names()]

    def cross_claims(self) -> list[tuple[str, str]]:
        path = self.dir / "cross.claims"
        out = []
        for raw in path.read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                alg, _, rest = line.partition(" satisfies ")
                out.append((normalize_name(alg.strip()), rest.strip()))
        return out


# ---------------------------------------------------------------- soundness

@dataclass
class SchemeResult:
    scheme: IdentityScheme
    verdict: Verdict
    erratum: IdentityScheme | None = None
    erratum_verdict: Verdict | None = None


@dataclass
class SoundnessReport:
    claim: BasisClaim
    results: list[SchemeResult]

    @property
    def passed(self) -> bool:
        return all(r.verdict.holds for r in self.results)

    @property
    def passed_with_errata(self) -> bool:
        return all(
            r.verdict.holds or (r.erratum_verdict is not None and r.erratum_verdict.holds)
            for r in self.results
        )

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            rec = f"scheme algebra={self.claim.algebra_name} identity={format_scheme(r.scheme)!r} verdict={r.verdict}"
            if r.erratum is not None:
                rec += f" erratum={format_scheme(r.erratum)!r} erratum_verdict={r.erratum_verdict}"
            out.append(rec)
        return out


def verify_soundness(claim: BasisClaim, catalog: Catalog | None = None) -> SoundnessReport:
    catalog = catalog or default_catalog()
    alg = catalog.algebra(claim.algebra_name)
    results = []
    for i, s in enumerate(claim.schemes):
        r = SchemeResult(s, satisfies_scheme(alg, s))
        if i in claim.errata:
            r.erratum = claim.errata[i]
            r.erratum_verdict = satisfies_scheme(alg, r.erratum)
        results.append(r)
    return SoundnessReport(claim, results)


@dataclass
class CrossResult:
    algebra: str
    claim: str
    passed: bool
    detail: str = ""


def verify_cross_claims(claims: ClaimSet | None = None) -> list[CrossResult]:
    claims = claims or ClaimSet()
    out = []
    for alg_name, what in claims.cross_claims():
        alg = claims.catalog.algebra(alg_name)
        if what.startswith(("basis-of ", "dual-of ")):
            kind, _, other = what.partition(" ")
            base = claims.get(other)
            schemes = base.corrected_schemes() if kind == "basis-of" else [s.reversed() for s in base.corrected_schemes()]
            bad = [(s, v) for s in schemes if not (v := satisfies_scheme(alg, s)).holds]
            detail = "; ".join(f"{format_scheme(s)}: {v}" for s, v in bad)
            out.append(CrossResult(alg_name, what, not bad, detail))
        else:
            v = satisfies_scheme(alg, _as_scheme(parse(what)))
            out.append(CrossResult(alg_name, what, v.holds, "" if v.holds else str(v)))
    return out


# ----------------------------------------------------- countermodel search

@lru_cache(maxsize=None)
def models_up_to(k: int) -> tuple[FiniteAiSemiring, ...]:
    """Every ai-semiring of order <= k up to isomorphism, smallest first."""
    out: list[FiniteAiSemiring] = []
    for n in range(1, k + 1):
        out.extend(enumerate_order(n, stretch=True).representatives)
    return tuple(out)


_scheme_memo: dict[tuple[int, IdentityScheme], bool] = {}
_mask_memo: dict[tuple[int, int], np.ndarray] = {}


def _model_holds(m: FiniteAiSemiring, s: IdentityScheme) -> bool:
    # models come from a cached tuple, so id() is stable for their lifetime
    key = (id(m), s)
    if key not in _scheme_memo:
        _scheme_memo[key] = satisfies_scheme(m, s).holds
    return _scheme_memo[key]


def _model_mask(m: FiniteAiSemiring, corpus) -> np.ndarray:
    key = (id(m), id(corpus))
    if key not in _mask_memo:
        _mask_memo[key] = CorpusEvaluator(m, corpus).pair_mask()
    return _mask_memo[key]


def models_of(schemes, max_order: int) -> list[FiniteAiSemiring]:
    return [m for m in models_up_to(max_order) if all(_model_holds(m, s) for s in schemes)]


def countermodel_search(schemes, target: Identity, max_order: int = 4) -> FiniteAiSemiring | None:
    """Least algebra of order <= max_order satisfying every scheme but not `target`."""
    if max_order > 4:
        raise ValueError("countermodel search is limited to order 4")
    for m in models_of([_as_scheme(s) for s in schemes], max_order):
        if not satisfies(m, target).holds:
            return m
    return None


@dataclass
class CompletenessReport:
    algebra: str
    max_order: int
    corpus_size: int
    identities: int
    models: int
    red_flags: list[tuple[Identity, FiniteAiSemiring]]

    @property
    def passed(self) -> bool:
        return not self.red_flags

    def summary(self) -> str:
        if self.passed:
            return (
                f"completeness algebra={self.algebra} identities={self.identities} models={self.models} "
                f"result=no countermodel of order <= {self.max_order}"
            )
        return (
            f"completeness algebra={self.algebra} identities={self.identities} models={self.models} "
            f"result=red-flags count={len(self.red_flags)}"
        )


def completeness_evidence(
    claim: BasisClaim,
    corpus_bounds: tuple[int, int, int] = (3, 3, 3),
    max_order: int = 4,
    catalog: Catalog | None = None,
    schemes=None,
    keep: int = 20,
) -> CompletenessReport:
    """Look for a model of the basis failing some corpus identity of the algebra."""
    if not claim.finitely_based:
        raise ValueError(f"{claim.algebra_name} is not claimed finitely based")
    catalog = catalog or default_catalog()
    alg = catalog.algebra(claim.algebra_name)
    corpus = build_corpus(*corpus_bounds)
    own = CorpusEvaluator(alg, corpus).pair_mask()
    schemes = claim.corrected_schemes() if schemes is None else schemes
    models = models_of(schemes, max_order)
    flags: list[tuple[Identity, FiniteAiSemiring]] = []
    flagged = np.zeros(len(corpus), dtype=bool)
    for m in models:
        bad = own & ~_model_mask(m, corpus) & ~flagged
        for k in np.flatnonzero(bad):
            if len(flags) < keep:
                flags.append((corpus.pair(int(k)).identity(), m))
        flagged |= bad
    report = CompletenessReport(
        claim.algebra_name, max_order, len(corpus), int(own.sum()), len(models), flags
    )
    report.flag_count = int(flagged.sum())
    return report


@dataclass
class MutationResult:
    dropped: IdentityScheme
    red_flags: int


def mutation_test(
    claim: BasisClaim,
    corpus_bounds: tuple[int, int, int] = (3, 3, 3),
    max_order: int = 4,
    catalog: Catalog | None = None,
) -> list[MutationResult]:
    out = []
    full = claim.corrected_schemes()
    for i in range(len(full)):
        reduced = full[:i] + full[i + 1 :]
        rep = completeness_evidence(claim, corpus_bounds, max_order, catalog, schemes=reduced, keep=1)
        out.append(MutationResult(full[i], rep.flag_count))
    return out


# ------------------------------------------------------------ theorem report

@dataclass
class TheoremRow:
    algebra: str
    status: str
    source: str
    soundness: str
    completeness: str
    structure: str = ""


def zero_roundtrip(alg: FiniteAiSemiring):
    """Isomorphism between adjoin_zero(strip_zero(alg)) and alg, or None."""
    return find_isomorphism(adjoin_zero(strip_zero(alg)), alg)


def theorem_report(
    claims: ClaimSet | None = None,
    completeness_for: tuple[str, ...] = (),
    max_order: int = 4,
) -> list[TheoremRow]:
    claims = claims or ClaimSet()
    rows = []
    for claim in claims.all():
        if claim.finitely_based:
            rep = verify_soundness(claim, claims.catalog)
            if not claim.schemes:
                sound = "pass (no printed basis)"
            elif rep.passed:
                sound = "pass"
            elif rep.passed_with_errata:
                sound = "fail as printed; erratum reading passes"
            else:
                sound = "fail"
            comp = "not run"
            if claim.algebra_name in completeness_for:
                comp = completeness_evidence(claim, max_order=max_order, catalog=claims.catalog).summary()
            rows.append(TheoremRow(claim.algebra_name, "fb", claim.source, sound, comp))
        else:
            alg = claims.catalog.algebra(claim.algebra_name)
            iso = zero_roundtrip(alg)
            s7 = claims.catalog.algebra("S_7^0")
            same = canonical_form(s7) == canonical_form(alg)
            structure = "zero roundtrip isomorphic" if iso is not None and same else "zero roundtrip FAILED"
            rows.append(TheoremRow(claim.algebra_name, "nfb", claim.source, "n/a", "n/a", structure))
    return rows


def theorem_lines(rows: list[TheoremRow]) -> list[str]:
    lines = [
        f"row algebra={r.algebra} status={r.status} source={r.source} soundness={r.soundness!r} "
        f"completeness={r.completeness!r}" + (f" structure={r.structure!r}" if r.structure else "")
        for r in rows
    ]
    fb = sum(r.status == "fb" for r in rows)
    sound = sum(r.soundness.startswith("pass") for r in rows)
    lines.append(f"summary rows={len(rows)} finitely_based={fb} nonfinitely_based={len(rows) - fb} soundness_pass={sound}")
    return lines
