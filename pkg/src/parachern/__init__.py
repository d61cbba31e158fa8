"""Exact intersection-theory calculator for parabolic bundle Chern classes.

The package models Chow rings as truncated graded polynomial rings over
exact rationals, presents parabolic bundles as weighted sums of bundle
classes, computes their Chern classes through a formal cover, and verifies
the defining tautological-line-bundle relation together with the direct
sum, dual and tensor identities.  A small scene language and a CLI drive
everything from text files.
"""

from .rings import (
    GradedRing,
    RingElement,
    RingMismatchError,
    RewriteCapError,
    RuleError,
    character_from_chern,
    chern_from_character,
    exp_nilpotent,
    log_unipotent,
)
from .chow import (
    ChowDescription,
    CoverModel,
    MissingIntegralError,
    Variety,
    build_ring,
    build_variety,
    integrate,
    make_cover,
)
from .bundles import (
    OrdinaryBundleClass,
    ParabolicBundle,
    character_element,
    chern_character,
    chern_polynomial,
    cover_bundle,
    cover_order,
    direct_sum,
    dual,
    line_bundle,
    parabolic_chern,
    relation_classes,
    tensor,
    trivial_line,
    weight_multiplicities,
)
from .grothendieck import (
    PairIdentityChecks,
    ProjBundleElement,
    ProjBundleRing,
    RelationCheck,
    solve_from_relation,
    verify_cover_pullback,
    verify_pair_identities,
    verify_relation,
)
from .frontend import (
    Diagnostic,
    ElaborationError,
    ParseError,
    Scene,
    SceneAST,
    elaborate,
    format_program,
    parse_program,
)
from .cli import run

__version__ = "0.1.0"

__all__ = [
    "GradedRing",
    "RingElement",
    "RingMismatchError",
    "RewriteCapError",
    "RuleError",
    "character_from_chern",
    "chern_from_character",
    "exp_nilpotent",
    "log_unipotent",
    "ChowDescription",
    "CoverModel",
    "MissingIntegralError",
    "Variety",
    "build_ring",
    "build_variety",
    "integrate",
    "make_cover",
    "OrdinaryBundleClass",
    "ParabolicBundle",
    "character_element",
    "chern_character",
    "chern_polynomial",
    "cover_bundle",
    "cover_order",
    "direct_sum",
    "dual",
    "line_bundle",
    "parabolic_chern",
    "relation_classes",
    "tensor",
    "trivial_line",
    "weight_multiplicities",
    "PairIdentityChecks",
    "ProjBundleElement",
    "ProjBundleRing",
    "RelationCheck",
    "solve_from_relation",
    "verify_cover_pullback",
    "verify_pair_identities",
    "verify_relation",
    "Diagnostic",
    "ElaborationError",
    "ParseError",
    "Scene",
    "SceneAST",
    "elaborate",
    "format_program",
    "parse_program",
    "run",
]
