"""Numerical toolkit for weighted pluripotential theory on finite sample sets.

Weighted Tchebyshev constants by exact LP, weighted orthonormal polynomials
by QR, discrete Green function approximants, the circular lift, and
leading-coefficient asymptotics for compact sets and Freud-type weights.
"""

from .asymptotics import (
    AsymptoticsReport,
    FreudProblem,
    GridSpec,
    estimate_contact_set,
    hermite_log_leading,
    parse_freud,
    run_example41,
    run_theorem41,
    scale_problem,
    truncation_radius,
)
from .bernstein import BMTrace, Sandwich, bm_trace, homogeneous_split_check, sandwich_ratio, weierstrass_surrogate
from .errors import (
    AdmissibilityError,
    ApproximationError,
    ConditioningError,
    ConfigurationError,
    EmptyResultError,
    InputError,
    NumericalGuardError,
    PlurikitError,
    PreconditionError,
    RankDeficiencyError,
    SolverError,
)
from .extremal import (
    GreenApprox,
    green_homogeneous,
    green_unweighted,
    green_weighted,
    robin_estimate,
    weight_monotonicity_check,
)
from .geometry import (
    Ball,
    Box,
    Circle,
    CircularSample,
    DiscreteMeasure,
    Interval,
    Torus,
    WeightedSampleSet,
    build_grid_set,
    extract_weight,
    gauss_legendre_grid,
    lift_circular,
    product_measure,
    uniform_measure,
)
from .minimax import TchebyshevResult, solve_minimax, tcheby_sequence
from .orthopoly import OrthoResult, l2_optimal_sup_norm, orthonormalize, weighted_vandermonde
from .polyalg import (
    Basis,
    Direction,
    HomogeneousPoly,
    MultiIndex,
    Poly,
    dehomogenize,
    direction_sequence,
    eval_homogeneous,
    eval_poly,
    homogenize,
    lower_order_basis,
    monomials_upto,
)

__all__ = [
    "AsymptoticsReport", "FreudProblem", "GridSpec", "estimate_contact_set", "hermite_log_leading",
    "parse_freud", "run_example41", "run_theorem41", "scale_problem", "truncation_radius", "BMTrace",
    "bm_trace", "homogeneous_split_check", "Sandwich", "sandwich_ratio", "weierstrass_surrogate", "AdmissibilityError",
    "ApproximationError", "ConditioningError", "ConfigurationError", "EmptyResultError", "InputError",
    "NumericalGuardError", "PlurikitError", "PreconditionError", "RankDeficiencyError", "SolverError",
    "GreenApprox", "green_homogeneous", "green_unweighted", "green_weighted", "robin_estimate",
    "weight_monotonicity_check", "Ball", "Box", "Circle", "CircularSample", "DiscreteMeasure", "Interval",
    "Torus", "WeightedSampleSet", "build_grid_set", "extract_weight", "gauss_legendre_grid", "lift_circular",
    "product_measure", "uniform_measure", "TchebyshevResult", "solve_minimax", "tcheby_sequence",
    "OrthoResult", "l2_optimal_sup_norm", "orthonormalize", "weighted_vandermonde", "Basis", "Direction",
    "HomogeneousPoly", "MultiIndex", "Poly", "dehomogenize", "direction_sequence", "eval_homogeneous",
    "eval_poly", "homogenize", "lower_order_basis", "monomials_upto",
]
