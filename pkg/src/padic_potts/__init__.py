"""Exact p-adic arithmetic and phase analysis for spin systems on trees."""

from .errors import (
    DenominatorDegenerate,
    DivisionByZero,
    DomainViolation,
    EnumerationTooLarge,
    LiftStall,
    NotInvertible,
    PadicError,
    PartitionFunctionDegenerate,
    PrecisionExhausted,
)
from .padic_core import (
    DEFAULT_PRECISION,
    PadicNumber,
    Prime,
    Valuation,
    as_prime,
    rational_valuation,
)
from .padic_analytic import (
    ConvergenceDisk,
    PadicPolynomial,
    exp_domain_min_valuation,
    exp_p,
    hensel_roots_in_disk,
    log_p,
)
from .cayley_tree import (
    GroupWord,
    TreeShape,
    TreeVertex,
    ball,
    direct_successors,
    edges,
    sphere,
    vertex_parity,
    word_of_vertex,
)
from .potts_model import (
    BoundaryField,
    CompatibilityReport,
    Configuration,
    CouplingField,
    NormProfileRow,
    PadicVector,
    boundary_field_from_json,
    compatibility_check,
    coupling_from_json,
    finite_measure,
    finite_measure_table,
    hamiltonian,
    measure_norm_profile,
    spin_pairing,
)
from .gibbs_solver import (
    VERDICT_INCONCLUSIVE,
    VERDICT_MULTIPLE_TI,
    VERDICT_NO_EXTRA_PERIODIC,
    VERDICT_UNIQUE,
    PhaseReport,
    RecursionResult,
    ThetaValue,
    ZVector,
    classify_phase,
    f_map_z,
    h_to_hprime,
    hprime_to_h,
    period2_k2_analysis,
    recursion_backward,
    solve_k1_bipartite,
    translation_invariant_cubic,
    uniqueness_certificate,
    witness_boundary_field,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryField",
    "CompatibilityReport",
    "Configuration",
    "ConvergenceDisk",
    "CouplingField",
    "DEFAULT_PRECISION",
    "DenominatorDegenerate",
    "DivisionByZero",
    "DomainViolation",
    "EnumerationTooLarge",
    "GroupWord",
    "LiftStall",
    "NormProfileRow",
    "NotInvertible",
    "PadicError",
    "PadicNumber",
    "PadicPolynomial",
    "PadicVector",
    "PartitionFunctionDegenerate",
    "PhaseReport",
    "PrecisionExhausted",
    "Prime",
    "RecursionResult",
    "ThetaValue",
    "TreeShape",
    "TreeVertex",
    "VERDICT_INCONCLUSIVE",
    "VERDICT_MULTIPLE_TI",
    "VERDICT_NO_EXTRA_PERIODIC",
    "VERDICT_UNIQUE",
    "Valuation",
    "ZVector",
    "as_prime",
    "ball",
    "boundary_field_from_json",
    "classify_phase",
    "compatibility_check",
    "coupling_from_json",
    "direct_successors",
    "edges",
    "exp_domain_min_valuation",
    "exp_p",
    "f_map_z",
    "finite_measure",
    "finite_measure_table",
    "h_to_hprime",
    "hamiltonian",
    "hensel_roots_in_disk",
    "hprime_to_h",
    "log_p",
    "measure_norm_profile",
    "period2_k2_analysis",
    "rational_valuation",
    "recursion_backward",
    "solve_k1_bipartite",
    "sphere",
    "spin_pairing",
    "translation_invariant_cubic",
    "uniqueness_certificate",
    "vertex_parity",
    "witness_boundary_field",
    "word_of_vertex",
    "__version__",
]
