"""Named algebras: the 93 order-4 tables plus algebras derived from them by recipes."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .algebra import (
    FiniteAiSemiring,
    adjoin_zero,
    diamond_addition,
    parse_algebra,
    power,
    quotient,
    strip_zero,
    subalgebra,
    validate,
)
from .structure import canonical_form, find_isomorphism, product_of

TABLE1_RANGE = range(388, 481)
DATA_ENV = "WORKBENCH_DATA"


class UnknownAlgebra(KeyError):
    def __str__(self) -> str:
        return f"unknown algebra {self.args[0]!r}"


class RecipeError(ValueError):
    pass


@dataclass(frozen=True)
class Recipe:
    kind: str  # table1 | sub | quot | strip0 | zero
    base: str | None = None
    argument: tuple = ()
    provisional: bool = False

    def __str__(self) -> str:
        if self.kind == "table1":
            return "table1"
        if self.kind == "sub":
            return f"sub({self.base}, {{{','.join(map(str, self.argument))}}})"
        if self.kind == "quot":
            blocks = ",".join("{" + ",".join(map(str, b)) + "}" for b in self.argument)
            return f"quot({self.base}, {{{blocks}}})"
        return f"{self.kind}({self.base})"

    @property
    def provenance(self) -> str:
        return {
            "table1": "table1",
            "sub": "subalgebra-of",
            "quot": "quotient-of",
            "strip0": "strip-zero-of",
            "zero": "adjoin-zero-of",
        }[self.kind]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: FiniteAiSemiring
    recipe: Recipe
    alternates: tuple[Recipe, ...] = field(default=())

    @property
    def provisional(self) -> bool:
        return self.recipe.provisional

    @property
    def provenance(self) -> str:
        if self.recipe.kind == "table1":
            return "table1"
        return f"{self.recipe.provenance} {self.recipe}"


@dataclass(frozen=True)
class ConsistencyReport:
    name: str
    routes: tuple[str, ...]
    mismatches: tuple[tuple[str, str], ...]

    @property
    def consistent(self) -> bool:
        return not self.mismatches

    def __str__(self) -> str:
        status = "consistent" if self.consistent else "inconsistent"
        lines = [f"cross_check name={self.name} routes={len(self.routes)} status={status}"]
        lines += [f"mismatch name={self.name} a={a} b={b}" for a, b in self.mismatches]
        return "\n".join(lines)


def table1_name(k: int) -> str:
    return f"S_(4,{k})"


def normalize_name(name: str) -> str:
    s = name.replace(" ", "")
    m = re.fullmatch(r"S_?\(?4[,_](\d+)\)?", s)
    if m:
        return table1_name(int(m.group(1)))
    return s


_RECIPE_RE = re.compile(r"^(?P<name>\S+)\s*:=\s*(?P<body>.+?)\s*(?P<prov>@provisional)?$")


def parse_recipe(body: str, provisional: bool = False) -> Recipe:
    body = body.strip()
    m = re.fullmatch(r"(sub|quot|strip0|zero)\((.*)\)", body)
    if not m:
        raise RecipeError(f"cannot parse recipe {body!r}")
    kind, inner = m.groups()
    if kind in ("strip0", "zero"):
        return Recipe(kind, normalize_name(inner), (), provisional)
    split = re.fullmatch(r"(.+?),\s*(\{.*\})", inner.strip())
    if not split:
        raise RecipeError(f"cannot parse recipe {body!r}")
    base, arg = split.groups()
    if kind == "sub":
        nums = re.fullmatch(r"\{([\d,\s]+)\}", arg)
        if not nums:
            raise RecipeError(f"bad subset in {body!r}")
        return Recipe("sub", normalize_name(base), tuple(int(t) for t in nums.group(1).split(",")), provisional)
    blocks = re.findall(r"\{([\d,\s]+)\}", arg)
    if not blocks:
        raise RecipeError(f"bad partition in {body!r}")
    part = tuple(tuple(int(t) for t in b.split(",")) for b in blocks)
    return Recipe("quot", normalize_name(base), part, provisional)


def parse_manifest(text: str) -> dict[str, list[Recipe]]:
    out: dict[str, list[Recipe]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RECIPE_RE.match(line)
        if not m:
            raise RecipeError(f"line {lineno}: cannot parse {line!r}")
        out.setdefault(m.group("name"), []).append(
            parse_recipe(m.group("body"), provisional=bool(m.group("prov")))
        )
    return out


def default_data_dir() -> Path:
    env = os.environ.get(DATA_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


class Catalog:
    def __init__(self, data_dir: str | os.PathLike | None = None):
        self.data_dir = Path(data_dir) if data_dir else default_data_dir()
        manifest = self.data_dir / "recipes.manifest"
        self.recipes: dict[str, list[Recipe]] = (
            parse_manifest(manifest.read_text(encoding="utf-8")) if manifest.exists() else {}
        )
        self._cache: dict[str, CatalogEntry] = {}
        self._resolving: set[str] = set()

    # names -------------------------------------------------------------
    def table1_names(self) -> list[str]:
        return [table1_name(k) for k in TABLE1_RANGE]

    def derived_names(self) -> list[str]:
        return list(self.recipes)

    def names(self) -> list[str]:
        return self.table1_names() + self.derived_names()

    def __contains__(self, name: str) -> bool:
        n = normalize_name(name)
        return n in self.recipes or n in self.table1_names()

    # loading -----------------------------------------------------------
    def _load_table1(self, name: str) -> FiniteAiSemiring:
        k = int(re.search(r"(\d+)\)$", name).group(1))
        path = self.data_dir / "table1" / f"S_4_{k}.alg"
        if not path.exists():
            raise UnknownAlgebra(name)
        alg = parse_algebra(path.read_text(encoding="utf-8"))
        if [list(r) for r in alg.add] != diamond_addition():
            raise RecipeError(f"{path.name}: addition differs from the diamond")
        return alg.named(name)

    def build(self, recipe: Recipe, name: str | None = None) -> FiniteAiSemiring:
        base = self.get(recipe.base).algebra
        if recipe.kind == "sub":
            return subalgebra(base, recipe.argument, name)
        if recipe.kind == "quot":
            return quotient(base, recipe.argument, name)
        if recipe.kind == "strip0":
            return strip_zero(base, name)
        if recipe.kind == "zero":
            return adjoin_zero(base, name)
        raise RecipeError(f"unknown recipe kind {recipe.kind}")

    def get(self, name: str) -> CatalogEntry:
        name = normalize_name(name)
        if name in self._cache:
            return self._cache[name]
        if name in self._resolving:
            raise RecipeError(f"recipe cycle through {name}")
        self._resolving.add(name)
        try:
            if name in self.table1_names():
                entry = CatalogEntry(name, self._load_table1(name), Recipe("table1"))
            elif name in self.recipes:
                primary, *alts = self.recipes[name]
                entry = CatalogEntry(name, self.build(primary, name), primary, tuple(alts))
            else:
                raise UnknownAlgebra(name)
        finally:
            self._resolving.discard(name)
        problems = validate(entry.algebra, first_only=True)
        if problems:
            raise RecipeError(f"{name} is not an ai-semiring: {problems[0]}")
        self._cache[name] = entry
        return entry

    def algebra(self, name: str) -> FiniteAiSemiring:
        return self.get(name).algebra

    def resolve(self, expr: str) -> FiniteAiSemiring:
        """A name, `NAME^k`, or a product `A x B x ...` of such terms."""
        factors = []
        for part in re.split(r"\s+x\s+|×", expr.strip()):
            m = re.fullmatch(r"(.+?)\^(\d+)", part.strip())
            if m and part.strip() not in self:  # T_2^0 is a name, not a power
                factors.append(power(self.algebra(m.group(1)), int(m.group(2))))
            else:
                factors.append(self.algebra(part.strip()))
        if len(factors) == 1:
            return factors[0].named(expr.strip()) if factors[0].name != expr.strip() else factors[0]
        return product_of(factors).named(expr.strip())

    def all_table1(self) -> list[CatalogEntry]:
        return [self.get(n) for n in self.table1_names()]

    def all_entries(self) -> list[CatalogEntry]:
        return [self.get(n) for n in self.names()]

    def cross_check(self, name: str) -> ConsistencyReport:
        entry = self.get(name)
        routes = [(str(entry.recipe), entry.algebra)]
        for alt in entry.alternates:
            routes.append((str(alt), self.build(alt, name)))
        mismatches = []
        first_label, first = routes[0]
        for label, alg in routes[1:]:
            if canonical_form(alg) != canonical_form(first):
                mismatches.append((first_label, label))
        return ConsistencyReport(entry.name, tuple(r for r, _ in routes), tuple(mismatches))

    def isomorphism_to(self, name: str, other: FiniteAiSemiring):
        return find_isomorphism(self.algebra(name), other)


@lru_cache(maxsize=4)
def _catalog_for(path: str) -> Catalog:
    return Catalog(path)


def default_catalog() -> Catalog:
    return _catalog_for(str(default_data_dir()))


def get(name: str) -> CatalogEntry:
    return default_catalog().get(name)


def all_table1() -> list[CatalogEntry]:
    return default_catalog().all_table1()


def cross_check(name: str) -> ConsistencyReport:
    return default_catalog().cross_check(name)
