"""Fractional-calculus numerics with explicit dimensional bookkeeping.

The toolkit covers: the exponential-kernel (non-singular) fractional
derivative and the classical power-law one on sampled functions, the
symbolic time-exponent algebra that makes homogeneity claims checkable,
the dimensionless-time rescaling that restores homogeneity for the
exponential kernel, a closed-form + numeric solver for first-order
linear fractional equations, and the fractional RC charging circuit as
a fully cross-checked worked example.
"""

from .dims import (
    DIMENSIONLESS,
    PER_TIME,
    TIME,
    DimensionedQuantity,
    DimExpr,
    TimeExponent,
    check_homogeneity,
    dim_of_operator,
    seconds,
)
from .errors import (
    ConfigError,
    CsvParseError,
    DimensionMismatchError,
    DomainError,
    FracdimError,
    SingularityError,
    TauRangeError,
)
from .kernels import (
    DEFAULT_NORMALIZATION,
    FractionalOrder,
    KernelNormalization,
    caputo_derivative,
    cf_derivative,
    cf_derivative_direct,
    cf_laplace_residual,
    cf_limit_alpha_zero,
    discrete_derivative,
    laplace_transform,
    sigma_rescaled_caputo,
)
from .rescaling import (
    ClassicalLinearODE,
    TimeScale,
    check_alpha_one_reduction,
    constant_scale,
    rc_exponential_scale,
    tabulated_scale,
    t_of_tau,
    tau_of_t,
    rescale_problem,
)
from .sampling import SampledFunction, UniformGrid, from_callable, read_csv, write_csv
from .solver import (
    ClosedFormSolution,
    LinearFDEProblem,
    ReducedODE,
    cf_residual,
    integrating_factor,
    reduce_to_ode,
    solve_closed_form,
    solve_numeric,
)
from .rc import (
    DEFAULT_ALPHA_SWEEP,
    RCParams,
    c0_for_zero_start,
    capacitor_voltage,
    charge_t,
    charge_tau,
    figure2_curves,
    rc_time_scale,
)
from .curves import Curve, write_curve_csv, write_long_csv

__version__ = "0.1.0"
