"""mumtau: canonical bases at unipotent singularities and zeta recognition.

The package computes the canonical log-series solution basis of a linear
ODE at a point of maximally unipotent monodromy, continues solutions
numerically at high precision, solves for the expansion coefficients of a
given series solution over that basis, and recognizes the coefficients as
exact rational combinations of zeta values.
"""

from .arith import (ConstantValue, Rational, central_binomial, const_log2,
                    const_pi, harmonic, hypergeometric_coeffs, zeta)
from .continuation import (SolutionSample, TransferMatrix, continue_along,
                           eval_logseries, eval_logseries_jet, formal_monodromy,
                           monodromy_matrix, taylor_step, transport_basis)
from .errors import (ChartMismatchError, InputError, MumTauError, NotMumError,
                     NumericError)
from .fixtures import FIXTURES, get_fixture
from .frobenius import (FrobeniusBasis, analytic_solution, frobenius_basis,
                        residual_order)
from .ode import (PolyQ, Recurrence, SingularitySet, ThetaOperator,
                  apply_operator, derive_recurrence, indicial_polynomial,
                  invert_variable, is_mum, rescale_variable, shift_variable,
                  singularities)
from .pipeline import (IdentityReport, JobSpec, TauReport, compute_tau,
                       gfunction_growth_report, identity_suite, selftest,
                       verify_expansion_at_boundary)
from .recognize import (ConstantBasis, RecognitionResult, build_basis,
                        integer_relation, recognize)
from .series import LogSeries, SeriesQ

__version__ = "0.1.0"

__all__ = [
    "ChartMismatchError", "ConstantBasis", "ConstantValue", "FIXTURES",
    "FrobeniusBasis", "IdentityReport", "InputError", "JobSpec", "LogSeries",
    "MumTauError", "NotMumError", "NumericError", "PolyQ", "Rational",
    "RecognitionResult", "Recurrence", "SeriesQ", "SingularitySet",
    "SolutionSample", "TauReport", "ThetaOperator", "TransferMatrix",
    "analytic_solution", "apply_operator", "build_basis", "central_binomial",
    "compute_tau", "const_log2", "const_pi", "continue_along",
    "derive_recurrence", "eval_logseries", "eval_logseries_jet",
    "formal_monodromy", "frobenius_basis", "get_fixture",
    "gfunction_growth_report", "harmonic", "hypergeometric_coeffs",
    "identity_suite", "indicial_polynomial", "integer_relation",
    "invert_variable", "is_mum", "monodromy_matrix", "recognize",
    "rescale_variable", "residual_order", "selftest", "shift_variable",
    "singularities", "taylor_step", "transport_basis",
    "verify_expansion_at_boundary", "zeta",
]
