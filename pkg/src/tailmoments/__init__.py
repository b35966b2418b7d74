"""Numerical laboratory for truncated moments of heavy-tailed distributions.

Computes the tail-weighted truncated moment h and its Stieltjes companion v
for a catalog of survival-function models, estimates regular-variation
indices and limiting mass shares, tests de Haan class membership, and
cross-checks the equivalence theorem tying all of these together.
"""

from .catalog import (GroundTruth, TailModel, build_model, load_tabulated,
                      make_geometric_tail, make_inverse_log, make_log_pareto,
                      make_pareto, make_st_petersburg, MODEL_REGISTRY)
from .errors import (AdmissionError, ConvergenceError, ExtrapolationWarning,
                     InconsistencyError, IndeterminateError,
                     InsufficientDataError, ModelEvaluationError,
                     ModelValidationError, TableFormatError, TailMomentsError)
from .moments import (MomentCurve, build_curve, build_grid, check_admission,
                      compute_h, compute_u, compute_v, curve_to_csv,
                      stieltjes_v)
from .params import DEFAULT_LAMBDAS, AnalysisParams
from .asymptotics import (GammaResult, PiTestResult, RVEstimate, ScalePoint,
                          centered_pi_ratio, estimate_rv_index,
                          gamma_classification, has_incommensurable_pair,
                          limit_ratio_r1, pi_class_test)
from .quadrature import integrate_tail_piece
from .verifier import (ConditionVerdict, EquivalenceCheck, TheoremReport,
                       check_asymptotic_equivalences, verify)

__version__ = "0.1.0"

__all__ = [
    "AdmissionError", "AnalysisParams", "ConditionVerdict", "ConvergenceError",
    "DEFAULT_LAMBDAS", "EquivalenceCheck", "ExtrapolationWarning",
    "GammaResult", "GroundTruth", "InconsistencyError", "IndeterminateError",
    "InsufficientDataError", "MODEL_REGISTRY", "ModelEvaluationError",
    "ModelValidationError", "MomentCurve", "PiTestResult", "RVEstimate",
    "ScalePoint", "TableFormatError", "TailModel", "TailMomentsError",
    "TheoremReport", "build_curve", "build_grid", "build_model",
    "centered_pi_ratio", "check_admission", "check_asymptotic_equivalences",
    "compute_h", "compute_u", "compute_v", "curve_to_csv",
    "estimate_rv_index", "gamma_classification", "has_incommensurable_pair",
    "integrate_tail_piece", "limit_ratio_r1", "load_tabulated",
    "make_geometric_tail", "make_inverse_log", "make_log_pareto",
    "make_pareto", "make_st_petersburg", "pi_class_test", "stieltjes_v",
    "verify",
]
