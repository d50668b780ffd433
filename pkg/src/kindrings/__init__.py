"""Exact convolution algebras of finite groupoids and kind-ring checks."""

from .errors import (
    BudgetExceededError,
    GroupoidValidationError,
    KindringsError,
    RingParseError,
    StarHomomorphismError,
    UsageError,
)
from .rings import (
    GaussianIntegers,
    Integers,
    Localized,
    PolyExt,
    Quadratic,
    Rationals,
    RingElement,
    RingSpec,
    parse_ring_spec,
)
from .groupoids import (
    FiniteGroupoid,
    cyclic_group_table,
    disjoint_union,
    full_equivalence_groupoid,
    groupoid_from_group_action,
    is_bisection,
    load_groupoid_file,
)
from .matrices import (
    RingMatrix,
    RingVector,
    conjugation_map,
    householder_from_vector,
    non_monomial_unitary_from_vector,
)
from .algebra import (
    AlgebraElement,
    StarHomomorphism,
    convolve,
    enumerate_projections,
    from_matrix,
    is_diagonal,
    is_diagonal_preserving,
    is_normalizer_pair,
    is_projection,
    star,
    to_matrix,
)
from .kindness import (
    SearchBounds,
    certify_kind,
    check_ring,
    is_l_ring_violation,
    poly_unit_vector_reduce,
    quadratic_split,
    search_condition1,
    search_condition2,
    search_condition6,
    witness_cond1_from_cond2,
    witness_cond2_from_cond1,
)

__all__ = [
    "BudgetExceededError",
    "GroupoidValidationError",
    "KindringsError",
    "RingParseError",
    "StarHomomorphismError",
    "UsageError",
    "GaussianIntegers",
    "Integers",
    "Localized",
    "PolyExt",
    "Quadratic",
    "Rationals",
    "RingElement",
    "RingSpec",
    "parse_ring_spec",
    "FiniteGroupoid",
    "cyclic_group_table",
    "disjoint_union",
    "full_equivalence_groupoid",
    "groupoid_from_group_action",
    "is_bisection",
    "load_groupoid_file",
    "RingMatrix",
    "RingVector",
    "conjugation_map",
    "householder_from_vector",
    "non_monomial_unitary_from_vector",
    "AlgebraElement",
    "StarHomomorphism",
    "convolve",
    "enumerate_projections",
    "from_matrix",
    "is_diagonal",
    "is_diagonal_preserving",
    "is_normalizer_pair",
    "is_projection",
    "star",
    "to_matrix",
    "SearchBounds",
    "certify_kind",
    "check_ring",
    "is_l_ring_violation",
    "poly_unit_vector_reduce",
    "quadratic_split",
    "search_condition1",
    "search_condition2",
    "search_condition6",
    "witness_cond1_from_cond2",
    "witness_cond2_from_cond1",
]

__version__ = "0.1.0"
