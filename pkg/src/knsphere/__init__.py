"""Exact Krichever-Novikov type algebras on the genus-0 sphere.

Multi-point algebras of meromorphic forms holomorphic away from the marked
points: the function algebra, vector fields, differential operators of degree
at most one, the Lie superalgebra and the Jordan superalgebra, with their
almost-graded structure, the residue duality pairing, and the geometric
2-cocycles defining central extensions.  All arithmetic is exact over the
rationals.
"""

from .exact import INF, LaurentJet, Poly, Rat, RatFunc, laurent_at, residue
from .surface import (
    BasisIndex,
    ConfigError,
    HalfInt,
    SurfaceConfig,
    Window,
    degree_set,
    half,
    prescribed_orders,
)
from .knbasis import (
    FormExpansion,
    MeroForm,
    NotAHolomorphicError,
    WeightError,
    basis_element,
    expand,
    filtration_degree,
    kn_pairing,
    kn_pairing_out,
    reconstruct,
)
from .knalgebra import (
    D1Element,
    JordanElement,
    StructTable,
    SuperElement,
    bracket,
    d1_bracket,
    grading_bounds,
    jordan_product,
    lie_derivative,
    mult,
    struct_table,
    super_bracket,
    triangular_part,
)
from .kncohomology import (
    CocycleSpec,
    CycleClass,
    LinearForm,
    ProjectiveConnection,
    boundedness_report,
    coboundary,
    cocycle_half,
    cocycle_super,
    cocycle_vector,
    connection_change_check,
    extended_bracket,
    independence_rank,
    schwarzian,
    super_cocycle_check,
    trivialize_odd_cocycle,
)
from .verify import run_suites

__all__ = [
    "INF",
    "LaurentJet",
    "Poly",
    "Rat",
    "RatFunc",
    "laurent_at",
    "residue",
    "BasisIndex",
    "ConfigError",
    "HalfInt",
    "SurfaceConfig",
    "Window",
    "degree_set",
    "half",
    "prescribed_orders",
    "FormExpansion",
    "MeroForm",
    "NotAHolomorphicError",
    "WeightError",
    "basis_element",
    "expand",
    "filtration_degree",
    "kn_pairing",
    "kn_pairing_out",
    "reconstruct",
    "D1Element",
    "JordanElement",
    "StructTable",
    "SuperElement",
    "bracket",
    "d1_bracket",
    "grading_bounds",
    "jordan_product",
    "lie_derivative",
    "mult",
    "struct_table",
    "super_bracket",
    "triangular_part",
    "CocycleSpec",
    "CycleClass",
    "LinearForm",
    "ProjectiveConnection",
    "boundedness_report",
    "coboundary",
    "cocycle_half",
    "cocycle_super",
    "cocycle_vector",
    "connection_change_check",
    "extended_bracket",
    "independence_rank",
    "schwarzian",
    "super_cocycle_check",
    "trivialize_odd_cocycle",
    "run_suites",
]
