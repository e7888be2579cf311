"""Differences of Čebyšev functionals over two overlapping or nested intervals.

Core pieces: expression-defined functions with declared class constants
(``funcmodel``), adaptive quadrature of the functionals (``integrate``),
norm and modulus estimators (``analyze``), closed-form bounds (``bounds``)
and randomized verification (``verify``).
"""

from .errors import (ChebError, DomainViolationError, ExpressionSyntaxError, MissingConstantError,
                     NonDifferentiableError, PreconditionError, QuadratureError, UnknownIdentifierError)
from .funcmodel import ClassConstants, FunctionSpec, IntervalConfig, differentiate, evaluate, parse_function
from .integrate import (Antiderivative, QuadResult, TwoFunctionalDiff, chebyshev_functional,
                        chebyshev_via_identity, functional_difference, integrate, mean_difference, psi)
from .analyze import beta, derivative_norm, holder_estimate, lipschitz_estimate, lp_norm, total_variation
from .bounds import THEOREMS, BoundResult, ExponentPair, evaluate_corollary, generalized_pre_gruss, pre_gruss_bound

__version__ = "0.1.0"

__all__ = [
    "ChebError", "DomainViolationError", "ExpressionSyntaxError", "MissingConstantError",
    "NonDifferentiableError", "PreconditionError", "QuadratureError", "UnknownIdentifierError",
    "ClassConstants", "FunctionSpec", "IntervalConfig", "differentiate", "evaluate", "parse_function",
    "Antiderivative", "QuadResult", "TwoFunctionalDiff", "chebyshev_functional", "chebyshev_via_identity",
    "functional_difference", "integrate", "mean_difference", "psi",
    "beta", "derivative_norm", "holder_estimate", "lipschitz_estimate", "lp_norm", "total_variation",
    "THEOREMS", "BoundResult", "ExponentPair", "evaluate_corollary", "generalized_pre_gruss", "pre_gruss_bound",
]
