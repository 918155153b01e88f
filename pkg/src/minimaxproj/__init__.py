"""Best uniform polynomial approximation on [0,1] and numerical checks of
the properties of the metric projection onto P_n."""

from .duality import (DualityMeasure, enumerate_duality_members, make_duality_measure, support_check,
                      verify_duality)
from .errors import (CardinalityError, ConvergenceError, DomainError, EvaluationError, MembershipError,
                     MinimaxError, NumericalError, PreconditionError, ValidationError)
from .expr import ExprSyntaxError, FunctionExpr, parse_expr
from .funcspace import (DEFAULT_GRID, ZERO_MEASURE, AtomicMeasure, ContinuousFn, GridSpec, Polynomial,
                        eval_poly, pair, sup_norm, total_mass, total_variation)
from .projector import (EquioscillationCertificate, MaximizingSet, ProjectionResult, certify,
                        check_identities, maximizing_set, project_sequence, remez_project)
from .vandermonde import (CoefficientBoundReport, check_recursion, coefficient_bounds, eval_An,
                          recover_coefficients, verify_coefficient_bound)
from .varprobe import (ExclusionReport, GateauxOutcome, ProbeOutcome, annihilating_measure,
                       coderivative_quotient, exclusion_report, gateaux_at_poly, gateaux_poly_direction,
                       orthogonal_check, probe_convex, probe_scaling, probe_shift)

__version__ = "0.1.0"

__all__ = [
    "AtomicMeasure", "CardinalityError", "CoefficientBoundReport", "ContinuousFn", "ConvergenceError",
    "DEFAULT_GRID", "DomainError", "DualityMeasure", "EquioscillationCertificate", "EvaluationError",
    "ExclusionReport", "ExprSyntaxError", "FunctionExpr", "GateauxOutcome", "GridSpec", "MaximizingSet",
    "MembershipError", "MinimaxError", "NumericalError", "Polynomial", "PreconditionError", "ProbeOutcome",
    "ProjectionResult", "ValidationError", "ZERO_MEASURE", "annihilating_measure", "certify",
    "check_identities", "check_recursion", "coderivative_quotient", "coefficient_bounds",
    "enumerate_duality_members", "eval_An", "eval_poly", "exclusion_report", "gateaux_at_poly",
    "gateaux_poly_direction", "make_duality_measure", "maximizing_set", "orthogonal_check", "pair",
    "parse_expr", "probe_convex", "probe_scaling", "probe_shift", "project_sequence", "recover_coefficients",
    "remez_project", "sup_norm", "support_check", "total_mass", "total_variation", "verify_coefficient_bound",
    "verify_duality",
]
