"""Exact integrals of R-differentiable total and partial differential systems.

Polynomials live in the variables ``z<k>``, ``w<k>`` and their formal
conjugates ``~z<k>``, ``~w<k>``; all arithmetic is over the Gaussian
rationals.
"""

from .darboux import DarbouxExpr
from .errors import (
    CapabilityError,
    ChainBreaks,
    DivisionError,
    EigenvalueNotRational,
    InconsistentRecurrence,
    InputError,
    NonConstantMu,
    NonElementaryTerm,
    NotClosed,
    NotCompletelySolvable,
    NotRLinear,
    ParseError,
    RDiffError,
    ScopeError,
    UnassignedVariable,
    ZeroDenominator,
)
from .fileformat import SystemFile, load, parse_expr, parse_system_file, render
from .integrals import (
    CylindricalityProfile,
    IntegralCandidate,
    ideal_cofactors,
    necessary_condition_report,
    operators_of,
    verify,
    verify_first_integral,
    verify_last_multiplier,
    verify_partial_integral,
    wronskian,
)
from .numbers import GaussianRational, I
from .operators import DiffOperator, divergence, lie_derivative, lie_log, poisson_bracket
from .pfaffian import (
    PfaffForm,
    ansatz_gradient_solve,
    closedness_check,
    independence_rank,
    integrate_exact,
    log_gradient_form,
    synthesize_pfaffian,
)
from .poly import RPoly, RRational, RVariable, conjugate, wirt_diff
from .series import TruncatedSeries, cauchy_series, residual_check
from .spectral import (
    EigenChain,
    PsiChain,
    commute_check,
    eigen_decompose,
    exponent_nullspace,
    generalized_chain,
    integral_from_chains,
    linear_partial_integral,
    psi_chain,
    spectral_synthesis,
)
from .systems import (
    PdeSystem,
    RLinearPdeSystem,
    TotalSystem,
    build_operators,
    conjugate_system,
    extract_matrices,
    frobenius_check,
    jacobian_check,
    nondegeneracy_rank,
    operators_from_matrices,
    r_regularity_at,
)

__version__ = "0.1.0"
