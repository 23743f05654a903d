"""Command-line entry point. Output is one `key=value` record per line.

Exit codes: 0 ok, 1 check failed, 2 unknown algebra, 3 parse error,
4 budget exceeded, 5 claim failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import oracles as orc
from .algebra import (
    AlgebraFormatError,
    MalformedTableError,
    NotACongruenceError,
    format_algebra,
    is_congruence,
    normalize_partition,
    quotient,
    read_algebra,
    validate,
    write_algebra,
)
from .basis import (
    ClaimFormatError,
    ClaimSet,
    completeness_evidence,
    mutation_test,
    theorem_lines,
    theorem_report,
    verify_cross_claims,
    verify_soundness,
)
from .catalog import Catalog, RecipeError, UnknownAlgebra, default_catalog
from .enumeration import EnumerationBudgetError, census_diff, enumerate_order, enumerate_with_reduct
from .satisfaction import BudgetExceeded, build_corpus, satisfies_scheme
from .structure import SearchBudgetExceeded, canonical_form, congruences, find_embedding, is_subdirect_embedding
from .structure_claims import StructureClaimError, verify_structure_claims
from .terms import TermSyntaxError, format_scheme, parse

OK, FAIL, UNKNOWN, PARSE, BUDGET, CLAIM = 0, 1, 2, 3, 4, 5

EXPECTED_CENSUS = {1: 1, 2: 6, 3: 61, 4: 866}


class _Ctx:
    def __init__(self, args):
        self.args = args
        self.catalog = Catalog(args.data) if args.data else default_catalog()

    def algebra(self, ref: str):
        """A path to an algebra file, or a catalog expression such as `S_(4,440)^2`."""
        if os.path.exists(ref):
            return read_algebra(ref)
        return self.catalog.resolve(ref)


def _out(line: str = "") -> None:
    print(line)


# ------------------------------------------------------------------ catalog

def cmd_catalog(ctx, args) -> int:
    cat = ctx.catalog
    if args.action == "list":
        for name in cat.names():
            entry = cat.get(name)
            tag = " provisional=true" if entry.provisional else ""
            _out(f"algebra name={name} order={entry.algebra.order} provenance={entry.provenance!r}{tag}")
        return OK
    if not args.name:
        raise SystemExit("catalog show needs a NAME")
    entry = cat.get(args.name)
    sys.stdout.write(format_algebra(entry.algebra))
    _out(f"# provenance {entry.provenance}" + (" (provisional)" if entry.provisional else ""))
    for alt in entry.alternates:
        _out(f"# alternate {alt}")
    if args.cross_check:
        _out(str(cat.cross_check(args.name)))
    return OK


def cmd_validate(ctx, args) -> int:
    status = OK
    refs = args.algebras or ctx.catalog.names()
    for ref in refs:
        alg = ctx.algebra(ref)
        problems = validate(alg)
        label = alg.name or ref
        if problems:
            status = FAIL
            _out(f"validate name={label} status=invalid violations={len(problems)}")
            for v in problems[: args.max_violations]:
                _out(f"violation name={label} {v}")
        else:
            _out(f"validate name={label} status=valid")
    return status


def cmd_check(ctx, args) -> int:
    alg = ctx.algebra(args.algebra)
    scheme = parse(args.identity)
    verdict = satisfies_scheme(alg, scheme, budget=args.budget)
    _out(str(verdict))
    return OK if verdict.holds else FAIL


# ------------------------------------------------------------------- verify

def _verify_claim(ctx, claims, claim, args) -> bool:
    rep = verify_soundness(claim, ctx.catalog)
    for line in rep.lines():
        _out(line)
    ok = rep.passed
    status = "pass" if ok else ("fail-as-printed" if rep.passed_with_errata else "fail")
    _out(f"soundness algebra={claim.algebra_name} schemes={len(claim.schemes)} status={status}")
    if args.completeness and claim.finitely_based and claim.schemes:
        bounds = (args.vars, args.length, args.summands)
        comp = completeness_evidence(claim, bounds, args.max_order, ctx.catalog)
        _out(comp.summary())
        for ident, model in comp.red_flags:
            _out(f"red-flag algebra={claim.algebra_name} identity={str(ident)!r} model_order={model.order}")
        ok = ok and comp.passed
        if args.mutation:
            for m in mutation_test(claim, bounds, args.max_order, ctx.catalog):
                _out(f"mutation algebra={claim.algebra_name} dropped={format_scheme(m.dropped)!r} red_flags={m.red_flags}")
    return ok


def cmd_verify(ctx, args) -> int:
    claims = ClaimSet(catalog=ctx.catalog)
    if not args.all:
        if not args.claimfile:
            raise SystemExit("verify needs --all or a CLAIMFILE")
        if Path(args.claimfile).exists() or args.claimfile not in ctx.catalog:
            claim = claims.load_file(args.claimfile)
        else:
            claim = claims.get(args.claimfile)
        return OK if _verify_claim(ctx, claims, claim, args) else CLAIM
    ok = True
    passes = 0
    fb = 0
    for claim in claims.all():
        if claim.finitely_based:
            fb += 1
            good = _verify_claim(ctx, claims, claim, args)
            passes += good
            ok &= good
    for r in verify_cross_claims(claims):
        _out(f"cross algebra={r.algebra} claim={r.claim!r} status={'pass' if r.passed else 'fail'}"
             + (f" detail={r.detail!r}" if r.detail else ""))
        ok &= r.passed
    for r in verify_structure_claims(catalog=ctx.catalog):
        _out(r.record())
        ok &= r.status != "fail"
    rows = theorem_report(claims)
    nfb_ok = all(r.structure == "zero roundtrip isomorphic" for r in rows if r.status == "nfb")
    ok &= nfb_ok
    _out(f"summary finitely_based={fb} soundness_pass={passes} nonfinitely_based={len(rows) - fb} "
         f"nfb_structure={'pass' if nfb_ok else 'fail'}")
    return OK if ok else CLAIM


def cmd_report(ctx, args) -> int:
    claims = ClaimSet(catalog=ctx.catalog)
    rows = theorem_report(claims, tuple(ctx.catalog.get(n).name for n in args.completeness), args.max_order)
    if args.format == "human":
        _out(f"{'algebra':<11} {'status':<6} {'source':<28} soundness")
        for r in rows:
            _out(f"{r.algebra:<11} {r.status:<6} {r.source:<28} {r.soundness}{'  ' + r.structure if r.structure else ''}")
        fb = sum(r.status == "fb" for r in rows)
        _out(f"{len(rows)} algebras: {fb} finitely based, {len(rows) - fb} nonfinitely based")
    else:
        for line in theorem_lines(rows):
            _out(line)
    return OK


# -------------------------------------------------------------- enumeration

def cmd_enumerate(ctx, args) -> int:
    if args.reduct:
        res = enumerate_with_reduct(read_algebra(args.reduct).add)
        expected = None
    else:
        res = enumerate_order(args.order, stretch=args.stretch, jobs=args.jobs)
        expected = EXPECTED_CENSUS.get(args.order)
    _out(f"count {res.count}")
    if args.emit:
        out = Path(args.emit)
        out.mkdir(parents=True, exist_ok=True)
        for i, alg in enumerate(res.representatives, 1):
            write_algebra(alg.named(f"E_{alg.order}_{i}"), out / f"E_{alg.order}_{i:04d}.alg")
        _out(f"emitted dir={out} files={res.count}")
    if expected is not None and res.count != expected:
        for line in census_diff(res, expected):
            _out(line)
        return FAIL
    return OK


# ------------------------------------------------------------- structure

def cmd_embed(ctx, args) -> int:
    a, b = ctx.algebra(args.source), ctx.algebra(args.target)
    emb = find_embedding(a, b, node_budget=args.budget)
    if emb is None:
        _out("embedding none")
        return FAIL
    _out(f"embedding map={str(emb)!r}")
    return OK


def _parse_partition(text: str, n: int):
    import re

    blocks = [[int(t) for t in re.findall(r"\d+", b)] for b in re.findall(r"\{([^{}]*)\}", text)]
    if not blocks:
        raise AlgebraFormatError(f"cannot read partition {text!r}")
    return normalize_partition(blocks, n)


def _fmt_partition(p) -> str:
    return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in p) + "}"


def _catalog_name_for(ctx, alg) -> str | None:
    form = canonical_form(alg)
    for name in ctx.catalog.names():
        other = ctx.catalog.algebra(name)
        if other.order == alg.order and canonical_form(other) == form:
            return name
    return None


def cmd_quotient(ctx, args) -> int:
    alg = ctx.algebra(args.algebra)
    if args.partition is None:
        for p in congruences(alg):
            _out(f"congruence blocks={_fmt_partition(p)}")
        return OK
    part = _parse_partition(args.partition, alg.order)
    if not is_congruence(alg, part):
        _out(f"congruence blocks={_fmt_partition(part)} status=not-a-congruence")
        return FAIL
    q = quotient(alg, part)
    sys.stdout.write(format_algebra(q))
    name = _catalog_name_for(ctx, q)
    _out(f"# isomorphic-to {name}" if name else "# isomorphic-to none-in-catalog")
    return OK


def cmd_decompose(ctx, args) -> int:
    """Pairs of congruences meeting in the diagonal give subdirect decompositions."""
    alg = ctx.algebra(args.algebra)
    n = alg.order
    cons = [p for p in congruences(alg) if 1 < len(p) < n]
    found = 0
    if args.factors:
        factors = [ctx.algebra(f) for f in args.factors]
        emb = is_subdirect_embedding(alg, factors, node_budget=args.budget)
        _out(f"subdirect factors={' x '.join(args.factors)!r} status={'found' if emb else 'none'}"
             + (f" map={str(emb)!r}" if emb else ""))
        return OK if emb else FAIL
    for i, p in enumerate(cons):
        for q in cons[i + 1 :]:
            bp = {x: k for k, b in enumerate(p) for x in b}
            bq = {x: k for k, b in enumerate(q) for x in b}
            if len({(bp[x], bq[x]) for x in range(1, n + 1)}) != n:
                continue
            found += 1
            names = []
            for c in (p, q):
                nm = _catalog_name_for(ctx, quotient(alg, c))
                names.append(nm or f"order-{len(c)}-unnamed")
            _out(f"subdirect left={_fmt_partition(p)} right={_fmt_partition(q)} factors={' x '.join(names)!r}")
    if not found:
        _out("subdirect none (subdirectly irreducible by pairs)")
    return OK


# ---------------------------------------------------------------- oracles

def cmd_oracle_test(ctx, args) -> int:
    corpus = build_corpus(args.vars, args.length, args.summands)
    keys = list(orc.EXACT_ORACLES) + list(orc.NECESSITY_ORACLES) + ["s0"] if args.oracle == "all" else [args.oracle]
    status = OK
    for key in keys:
        if key == "s0":
            bases = [n for n in ctx.catalog.derived_names() if ctx.catalog.algebra(n).order <= 3]
            for name in bases:
                rep = orc.check_s0(ctx.catalog.algebra(name), corpus)
                _out(f"oracle s0 base={name} {rep.summary()}")
                status |= not rep.passed
            continue
        if key in orc.EXACT_ORACLES:
            name, fn = orc.EXACT_ORACLES[key]
            rep = orc.check_equivalence(fn, ctx.catalog.algebra(name), corpus, key)
        elif key in orc.NECESSITY_ORACLES:
            name, fn = orc.NECESSITY_ORACLES[key]
            rep = orc.check_necessity(fn, ctx.catalog.algebra(name), corpus, key)
        else:
            raise UnknownAlgebra(key)
        if len(keys) > 1:
            _out(f"oracle {key} algebra={name} {rep.summary()}")
        else:
            _out(rep.summary())
        for line in rep.lines()[: args.max_violations]:
            _out(line)
        status |= not rep.passed
    return FAIL if status else OK


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    def common(parser, default):
        # accepted before or after the subcommand; SUPPRESS keeps the later one from clobbering
        kw = {} if default else {"default": argparse.SUPPRESS}
        parser.add_argument("--data", help="catalog directory (default: $WORKBENCH_DATA or the bundled data)",
                            **({"default": None} if default else kw))
        parser.add_argument("--format", choices=("line", "human"), **({"default": "line"} if default else kw))
        parser.add_argument("--jobs", type=int, help="worker processes for enumeration",
                            **({"default": 1} if default else kw))

    shared = argparse.ArgumentParser(add_help=False)
    common(shared, default=False)
    p = argparse.ArgumentParser(prog="aisemiring", description="Finite ai-semiring verification workbench")
    common(p, default=True)
    sub = p.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[shared], **kw)

    def bounds(sp):
        sp.add_argument("--vars", type=int, default=3)
        sp.add_argument("--length", type=int, default=3)
        sp.add_argument("--summands", type=int, default=3)

    c = add_parser("catalog", help="list or show catalog algebras")
    c.add_argument("action", choices=("list", "show"))
    c.add_argument("name", nargs="?")
    c.add_argument("--cross-check", action="store_true")
    c.set_defaults(func=cmd_catalog)

    v = add_parser("validate", help="check the ai-semiring axioms")
    v.add_argument("algebras", nargs="*", help="names or files (default: whole catalog)")
    v.add_argument("--max-violations", type=int, default=5)
    v.set_defaults(func=cmd_validate)

    k = add_parser("check", help="decide one identity or scheme in an algebra")
    k.add_argument("algebra")
    k.add_argument("identity")
    k.add_argument("--budget", type=int, default=10**7)
    k.set_defaults(func=cmd_check)

    f = add_parser("verify", help="verify claimed bases and structural claims")
    f.add_argument("claimfile", nargs="?", help="claim file path or algebra name")
    f.add_argument("--all", action="store_true")
    f.add_argument("--completeness", action="store_true", help="also search for countermodels")
    f.add_argument("--mutation", action="store_true", help="with --completeness, drop each scheme in turn")
    f.add_argument("--max-order", type=int, default=4)
    bounds(f)
    f.set_defaults(func=cmd_verify)

    e = add_parser("enumerate", help="census of ai-semirings up to isomorphism")
    e.add_argument("--order", type=int, default=2)
    e.add_argument("--reduct", help="algebra file whose addition is fixed")
    e.add_argument("--stretch", action="store_true", help="allow the order-4 run")
    e.add_argument("--emit", help="write representatives to this directory")
    e.set_defaults(func=cmd_enumerate)

    m = add_parser("embed", help="find an embedding A -> B")
    m.add_argument("source")
    m.add_argument("target")
    m.add_argument("--budget", type=int, default=10**7)
    m.set_defaults(func=cmd_embed)

    q = add_parser("quotient", help="list congruences or build a quotient")
    q.add_argument("algebra")
    q.add_argument("partition", nargs="?")
    q.set_defaults(func=cmd_quotient)

    d = add_parser("decompose", help="subdirect decompositions from pairs of congruences")
    d.add_argument("algebra")
    d.add_argument("factors", nargs="*", help="check these factors instead")
    d.add_argument("--budget", type=int, default=10**7)
    d.set_defaults(func=cmd_decompose)

    o = add_parser("oracle-test", help="compare a syntactic oracle with brute force")
    o.add_argument("oracle", choices=list(orc.EXACT_ORACLES) + list(orc.NECESSITY_ORACLES) + ["s0", "all"])
    o.add_argument("--max-violations", type=int, default=20)
    bounds(o)
    o.set_defaults(func=cmd_oracle_test)

    r = add_parser("report", help="status table of the 93 order-4 algebras")
    r.add_argument("--completeness", nargs="*", default=[], metavar="NAME")
    r.add_argument("--max-order", type=int, default=4)
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctx = _Ctx(args)
        return args.func(ctx, args)
    except (UnknownAlgebra, KeyError) as exc:
        print(f"error kind=unknown-name detail={exc}", file=sys.stderr)
        return UNKNOWN
    except (TermSyntaxError, AlgebraFormatError, MalformedTableError, ClaimFormatError,
            StructureClaimError, RecipeError, NotACongruenceError) as exc:
        print(f"error kind=parse detail={exc}", file=sys.stderr)
        return PARSE
    except FileNotFoundError as exc:
        print(f"error kind=missing-file detail={exc.filename}", file=sys.stderr)
        return UNKNOWN
    except (BudgetExceeded, SearchBudgetExceeded, EnumerationBudgetError) as exc:
        print(f"error kind=budget detail={exc}", file=sys.stderr)
        return BUDGET


if __name__ == "__main__":
    sys.exit(main())
