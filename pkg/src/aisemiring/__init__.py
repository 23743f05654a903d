"""Verification workbench for finite additively idempotent semirings."""

from .algebra import (
    FiniteAiSemiring,
    additive_order,
    adjoin_zero,
    direct_product,
    is_congruence,
    quotient,
    strip_zero,
    subalgebra,
    validate,
)
from .basis import (
    BasisClaim,
    ClaimSet,
    completeness_evidence,
    countermodel_search,
    theorem_report,
    verify_cross_claims,
    verify_soundness,
)
from .catalog import Catalog, all_table1, cross_check, default_catalog, get
from .enumeration import all_join_semilattices, enumerate_order, enumerate_with_reduct
from .satisfaction import build_corpus, identities_of, satisfies, satisfies_scheme
from .structure import (
    canonical_form,
    congruences,
    dual,
    find_embedding,
    find_homomorphisms,
    find_isomorphism,
    is_subdirect_embedding,
)
from .structure_claims import verify_structure_claims
from .terms import expand_scheme, parse

__all__ = [name for name in dir() if not name.startswith("_")]
