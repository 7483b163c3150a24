"""Entropy-inequality toolkit for half-space evaporation and condensation
of a polyatomic gas with delta internal degrees of freedom."""

__version__ = "0.1.0"

from .admissibility import (
    AdmissibilityReport,
    ConditionResult,
    check_all,
    check_condensation,
    check_evaporation,
    check_overall,
    check_stationary,
)
from .entropy import Form, LambdaBreakdown, entropy_bound, lambda_direct, lambda_recast, lambda_value, upsilon
from .errors import (
    ContractViolation,
    CrossCheckError,
    InfeasibleMomentsError,
    NoFeasiblePointError,
    NumericalFailure,
    PolyEvapError,
    SearchBoundError,
    UnsupportedStandaloneError,
)
from .explorer import (
    BoundarySample,
    CurvePoint,
    SurfaceSample,
    boundary_surface,
    condensation_surface,
    evaporation_curve,
    max_positive_mach,
    maximize_lambda_p,
    maximize_lambda_pt,
)
from .gas import (
    FarFieldState,
    GasParams,
    HalfMoments,
    Regime,
    RegimeReport,
    boundary_half_moments,
    classify_regime,
    flux_moments,
    heat_capacity_ratio,
    incoming_half_moments,
)
from .kernels import half_gauss_moment, log_half_gauss_moment, moment_ratio, shape_function, theta
from .minflux import ShapeSolution, maxwellian_from_moments, min_flux, reduced_min_flux, solve_shape_parameter
