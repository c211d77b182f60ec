"""Iterated Atangana-Baleanu fractional differintegrals.

The operator of order ``(alpha, beta)`` is the ``beta``-th power of the
AB integral of order ``alpha``.  It acts on fractional power series exactly
and on uniformly sampled signals through product-trapezoid quadrature.
"""

from .analysis import (
    BoundReport,
    LaplaceCheckReport,
    bound_constant_K,
    laplace_check,
    laplace_closed_form,
    laplace_numeric,
    semigroup_residual,
    verify_bound,
)
from .classical_ops import (
    MULTIPLIERS,
    ONE,
    Multiplier,
    ab_integral,
    abc_derivative_sampled,
    abr_derivative_sampled,
    rl_integral_fps,
    rl_integral_sampled,
)
from .errors import (
    AlignmentError,
    BoundViolation,
    ConvergenceError,
    DiscriminantError,
    DomainError,
    IteratedABError,
    LinearDegenerateError,
    MismatchError,
    PoleError,
    ResonanceError,
    SingularDenominatorError,
)
from .fps import (
    FracPowerSeries,
    SampledSignal,
    add_fps,
    eval_fps,
    multiply_fps,
    sample_fps,
    scale_fps,
)
from .iterated_ab import (
    IteratedOrder,
    binomial_weights,
    iab_apply,
    iab_apply_fps,
    iab_apply_sampled,
    iab_derivative_fps,
    iab_iterate_check,
    identity_weight,
    series_coefficients,
)
from .ode_series import (
    QuadraticODEParams,
    RelaxationODEParams,
    SeriesSolution,
    residual_check,
    solve_linear,
    solve_quadratic,
    solve_relaxation,
)
from .specfun import DEFAULT_TOL, Tolerance, gamma, gamma_ratio, gen_binomial, mittag_leffler

__version__ = "0.1.0"
