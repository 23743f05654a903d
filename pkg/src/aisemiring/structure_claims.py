"""Check the quotient, subalgebra, embedding, duality and subdirect claims in structure.claims."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .algebra import ClosureError, is_congruence, normalize_partition, quotient, subalgebra
from .catalog import Catalog, default_catalog, normalize_name
from .enumeration import enumerate_order
from .structure import (
    dual,
    find_embedding,
    find_homomorphisms,
    find_isomorphism,
    is_subdirect_embedding,
    projections_surjective,
)

KINDS = ("quotient", "subalgebra", "embeds", "iso", "dual", "subdirect", "separated", "unverifiable")


class StructureClaimError(ValueError):
    pass


@dataclass(frozen=True)
class StructureClaim:
    kind: str
    args: tuple[str, ...]
    implied: bool = False
    provisional: bool = False
    line: int = 0

    def __str__(self) -> str:
        tags = " @implied" * self.implied + " @provisional" * self.provisional
        return f"{self.kind} {' '.join(self.args)}{tags}"


@dataclass(frozen=True)
class StructureResult:
    claim: StructureClaim
    status: str  # pass | fail | unverifiable
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def record(self) -> str:
        c = self.claim
        rec = f"structure kind={c.kind} args={' '.join(c.args)!r} status={self.status}"
        if c.implied:
            rec += " implied=true"
        if c.provisional:
            rec += " provisional=true"
        if self.detail:
            rec += f" detail={self.detail!r}"
        return rec


def _split_sets(text: str) -> list[str]:
    # keep {..} groups (which may nest) as single tokens
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch.isspace() and depth == 0:
            if cur:
                out.append(cur)
            cur = ""
            continue
        depth += (ch == "{") - (ch == "}")
        cur += ch
    if cur:
        out.append(cur)
    return out


def parse_structure_claims(text: str) -> list[StructureClaim]:
    claims = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = _split_sets(line)
        tags = {t for t in tokens if t.startswith("@")}
        tokens = [t for t in tokens if not t.startswith("@")]
        if tokens[0] not in KINDS:
            raise StructureClaimError(f"line {lineno}: unknown claim kind {tokens[0]!r}")
        unknown = tags - {"@implied", "@provisional"}
        if unknown:
            raise StructureClaimError(f"line {lineno}: unknown tag {sorted(unknown)[0]}")
        claims.append(
            StructureClaim(tokens[0], tuple(tokens[1:]), "@implied" in tags, "@provisional" in tags, lineno)
        )
    return claims


def load_structure_claims(path: str | Path | None = None, catalog: Catalog | None = None) -> list[StructureClaim]:
    if path is None:
        path = (catalog or default_catalog()).data_dir / "claims" / "structure.claims"
    return parse_structure_claims(Path(path).read_text(encoding="utf-8"))


def _ints(token: str) -> list[int]:
    return [int(t) for t in re.findall(r"\d+", token)]


def _blocks(token: str) -> list[list[int]]:
    return [_ints(b) for b in re.findall(r"\{([^{}]*)\}", token)]


def verify_structure_claim(claim: StructureClaim, catalog: Catalog | None = None) -> StructureResult:
    cat = catalog or default_catalog()
    a = claim.args
    kind = claim.kind
    if kind == "unverifiable":
        return StructureResult(claim, "unverifiable", "no table for a factor or host")

    if kind == "quotient":
        alg = cat.algebra(a[0])
        part = normalize_partition(_blocks(a[1]), alg.order)
        if not is_congruence(alg, part):
            return StructureResult(claim, "fail", "partition is not a congruence")
        iso = find_isomorphism(quotient(alg, part), cat.algebra(a[2]))
        return StructureResult(claim, "pass" if iso else "fail", f"map {iso}" if iso else "quotient not isomorphic")

    if kind == "subalgebra":
        alg = cat.algebra(a[0])
        try:
            sub = subalgebra(alg, _ints(a[1]))
        except ClosureError as exc:
            return StructureResult(claim, "fail", str(exc))
        iso = find_isomorphism(sub, cat.algebra(a[2]))
        return StructureResult(claim, "pass" if iso else "fail", f"map {iso}" if iso else "subalgebra not isomorphic")

    if kind == "embeds":
        emb = find_embedding(cat.resolve(a[0]), cat.resolve(a[1]))
        return StructureResult(claim, "pass" if emb else "fail", f"map {emb}" if emb else "no embedding")

    if kind == "iso":
        iso = find_isomorphism(cat.algebra(a[0]), cat.algebra(a[1]))
        return StructureResult(claim, "pass" if iso else "fail", f"map {iso}" if iso else "not isomorphic")

    if kind == "dual":
        iso = find_isomorphism(dual(cat.algebra(a[0])), cat.algebra(a[1]))
        return StructureResult(claim, "pass" if iso else "fail", f"map {iso}" if iso else "duals not isomorphic")

    if kind == "subdirect":
        alg = cat.algebra(a[0])
        factors = [cat.algebra(f) for f in a[1:]]
        emb = is_subdirect_embedding(alg, factors)
        ok = emb is not None and emb.is_injective() and emb.is_homomorphism() and projections_surjective(emb, factors)
        return StructureResult(claim, "pass" if ok else "fail", f"map {emb}" if ok else "no subdirect embedding")

    if kind == "separated":
        alg = cat.algebra(a[0])
        ok, detail = separated_by_order_two(alg)
        return StructureResult(claim, "pass" if ok else "fail", detail)

    raise StructureClaimError(f"unknown claim kind {kind}")


def separated_by_order_two(alg) -> tuple[bool, str]:
    """Whether homomorphisms into order-2 algebras separate every pair of elements.

    For a finite algebra this is exactly membership in the variety generated
    by all order-2 ai-semirings.
    """
    images = []
    for target in enumerate_order(2).representatives:
        images += [h.image for h in find_homomorphisms(alg, target)]
    signatures = {tuple(img[x - 1] for img in images) for x in alg.elements}
    ok = len(signatures) == alg.order
    return ok, f"homomorphisms={len(images)}" + ("" if ok else " some pair not separated")


def verify_structure_claims(
    claims: list[StructureClaim] | None = None, catalog: Catalog | None = None
) -> list[StructureResult]:
    cat = catalog or default_catalog()
    claims = load_structure_claims(catalog=cat) if claims is None else claims
    return [verify_structure_claim(c, cat) for c in claims]
