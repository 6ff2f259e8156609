"""Exact arithmetic for filtered Frobenius-monodromy modules over p-adic
fields: admissibility verdicts, invariant extraction, coordinate pairings,
and the differential identity evaluators, plus a deterministic CLI."""

from .coeff import DualNumber, GaloisShape, ProductElement
from .cohomology import (
    H1Tate,
    H1Trivial,
    H2Class,
    cup,
    degenerate_condition,
    monodromy_extension_class,
    pairing_is_perfect,
    satisfies_colmez_condition,
    unipotent_extension_class,
)
from .colmez import (
    FamilyGerm,
    colmez_form,
    degenerate_form,
    gamma_consistency,
    solve_ell_scalar,
)
from .errors import (
    BaseMismatch,
    ConstraintViolation,
    FieldMismatch,
    InvalidValuation,
    LevelMismatch,
    NonInvertiblePhi,
    NotMonodromyType,
    NotUnipotent,
    ParseError,
    PhinError,
    PrecisionLoss,
    RelationViolation,
    RootLiftingError,
    ShapeMismatch,
    SingularDirection,
    UnknownCommand,
    UnsupportedEnumeration,
    ValidationError,
    ZeroEll,
    ZeroInput,
)
from .filtration import (
    AdmissibilityVerdict,
    Filtration,
    dual_filtration,
    hodge_number,
    is_admissible,
    quotient_filtration,
    tensor_filtration,
)
from .isom import IsoVerdict, is_isomorphic
from .modules import (
    PhiNModule,
    dual_module,
    end0_module,
    hom_module,
    n_kernel_flag,
    newton_number,
    tensor_module,
    validate_module,
)
from .monodromy import (
    MonodromyData,
    build_degenerate,
    build_monodromy,
    build_w,
    check_constraints,
    end0_check,
    extract_invariants,
    iso_degenerate,
    twist_to_zero,
)
from .padic import INF, FieldElement, LocalFieldDesc
from .serial import Instance, dump_instance, parse_instance

__all__ = [
    "AdmissibilityVerdict",
    "BaseMismatch",
    "ConstraintViolation",
    "DualNumber",
    "FamilyGerm",
    "FieldElement",
    "FieldMismatch",
    "Filtration",
    "GaloisShape",
    "H1Tate",
    "H1Trivial",
    "H2Class",
    "INF",
    "Instance",
    "InvalidValuation",
    "IsoVerdict",
    "LevelMismatch",
    "LocalFieldDesc",
    "MonodromyData",
    "NonInvertiblePhi",
    "NotMonodromyType",
    "NotUnipotent",
    "ParseError",
    "PhinError",
    "PhiNModule",
    "PrecisionLoss",
    "ProductElement",
    "RelationViolation",
    "RootLiftingError",
    "ShapeMismatch",
    "SingularDirection",
    "UnknownCommand",
    "UnsupportedEnumeration",
    "ValidationError",
    "ZeroEll",
    "ZeroInput",
    "build_degenerate",
    "build_monodromy",
    "build_w",
    "check_constraints",
    "colmez_form",
    "cup",
    "degenerate_condition",
    "degenerate_form",
    "dual_filtration",
    "dual_module",
    "dump_instance",
    "end0_check",
    "end0_module",
    "extract_invariants",
    "gamma_consistency",
    "hodge_number",
    "hom_module",
    "is_admissible",
    "is_isomorphic",
    "iso_degenerate",
    "monodromy_extension_class",
    "n_kernel_flag",
    "newton_number",
    "pairing_is_perfect",
    "parse_instance",
    "quotient_filtration",
    "satisfies_colmez_condition",
    "solve_ell_scalar",
    "tensor_filtration",
    "tensor_module",
    "twist_to_zero",
    "unipotent_extension_class",
    "validate_module",
]
