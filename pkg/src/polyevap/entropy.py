"""Upper bound Lambda(p, T, M) on the total entropy production.

Two algebraically equivalent evaluations are provided:

direct
    boundary flux of the interface Maxwellian + far-field flux - minimal
    flux F of the impinging half moments.
recast
    the same bound with the moment integrals eliminated in favour of the
    shape parameter s and the invariant Upsilon = N1 N5 / N2**2.

Every formula contains log Gamma(delta/2) with coefficients
(L1, -N1+, +N1-) that sum to zero, so both paths drop the Gamma terms
symbolically. This is what makes delta = 0 (monatomic gas) regular.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ContractViolation, CrossCheckError, InfeasibleMomentsError
from .gas import (
    SQRT_2PI,
    FarFieldState,
    GasParams,
    HalfMoments,
    boundary_half_moments,
    flux_moments,
    incoming_half_moments,
)
from .minflux import reduced_min_flux, solve_shape_parameter

_LOG_2PI = math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)

CHECK_RTOL = 1e-8
CHECK_ATOL = 1e-10
NEAR_ZERO = 1e-2


class Form(str, Enum):
    DIRECT = "direct"
    RECAST = "recast"
    CHECKED = "checked"


@dataclass(frozen=True)
class LambdaBreakdown:
    """Lambda and its additive pieces, ``value = boundary + far_field - min_flux``.

    The pieces are form specific and reported with the cancelling
    log Gamma(delta/2) contributions removed.
    """

    value: float
    boundary_term: float
    far_field_term: float
    min_flux_term: float
    upsilon: float
    s: float
    form: Form


def upsilon(state: FarFieldState, gas: GasParams) -> float:
    """Upsilon(p, T, M) = N1- N5- / (N2-)**2 written in the far-field variables."""
    g, d, p, T, M = gas.gamma, gas.delta, state.p, state.T, state.mach
    den = 2.0 * p * (1.0 + g * M * M) - 1.0
    if den == 0.0:
        raise InfeasibleMomentsError("N2- vanishes, Upsilon is undefined", "n2", 0.0)
    num = 2.0 * (1.0 - p * math.sqrt(2.0 * math.pi * g / T) * M) * (
        4.0 + d - p * math.sqrt(2.0 * math.pi * g * T) * M * (5.0 + d + g * M * M)
    )
    return num / (math.pi * den * den)


def _feasible_moments(state: FarFieldState, gas: GasParams) -> HalfMoments:
    nm = incoming_half_moments(state, gas)
    for name in ("n2", "n1", "n5"):
        v = getattr(nm, name)
        if not v > 0.0:
            raise InfeasibleMomentsError(
                f"impinging half moment {name} = {v:.6g} is not positive "
                f"at p={state.p!r}, T={state.T!r}, M={state.mach!r}",
                name,
                v,
            )
    ups = nm.upsilon
    if not ups > 1.0:
        raise InfeasibleMomentsError(
            f"Upsilon = {ups:.6g} <= 1: no Maxwellian matches the impinging moments", "upsilon", ups
        )
    return nm


def lambda_direct(state: FarFieldState, gas: GasParams, seed: float | None = None) -> LambdaBreakdown:
    nm = _feasible_moments(state, gas)
    d, p, T = gas.delta, state.p, state.T
    l1 = flux_moments(state, gas).l1
    n1_plus = boundary_half_moments(gas).n1
    f_red, sol = reduced_min_flux(nm, gas, seed=seed)
    far = l1 * (1.5 * _LOG_2PI + 0.5 * (3.0 + d) + 0.5 * (5.0 + d) * math.log(T) - math.log(p))
    bnd = -n1_plus * (1.5 * _LOG_2PI + 2.0 + 0.5 * d)
    return LambdaBreakdown(bnd + far - f_red, bnd, far, f_red, sol.upsilon, sol.s, Form.DIRECT)


def _sqrt_term(s: float, ups: float, delta: float) -> float:
    return math.sqrt(s * s + 2.0 * (4.0 + delta) * ups)


def theta_tilde(s: float, ups: float, delta: float) -> float:
    """theta(s) - 1/2 - s**2 expressed through (s, Upsilon)."""
    r = _sqrt_term(s, ups, delta)
    if s < 0.0:
        # s**2 + s r = s K / (r - s) without cancellation
        ssr = s * 2.0 * (4.0 + delta) * ups / (r - s)
    else:
        ssr = s * s + s * r
    return 0.5 - ssr / (2.0 * ups)


def log_delta_factor(s: float, ups: float, delta: float) -> float:
    """log Delta, Delta = (Ups + s^2 (2 Ups - 1) - s R) (s + R)**(4+delta), R = sqrt(s^2 + 2(4+delta) Ups).

    The first factor equals Ups exp(-s^2) / (2 I_1(s)); for large positive s it
    is exponentially small and only as accurate as Upsilon itself.
    """
    k = 2.0 * (4.0 + delta) * ups
    r = math.sqrt(s * s + k)
    s_plus_r = s + r if s >= 0.0 else k / (r - s)
    first = ups + s * s * (2.0 * ups - 1.0) - s * r
    if not first > 0.0:
        raise InfeasibleMomentsError(
            f"recast factor lost to rounding at s={s:.6g} (Upsilon={ups!r})", "upsilon", ups
        )
    return math.log(first) + (4.0 + delta) * math.log(s_plus_r)


# Above this s the first factor of Delta, about exp(-s**2), sinks below the
# rounding of Upsilon and the recast is re-evaluated in extended precision.
RECAST_MP_THRESHOLD = 2.5


def _recast_terms(state: FarFieldState, gas: GasParams, ups: float, s: float):
    g, d, p, T, M = gas.gamma, gas.delta, state.p, state.T, state.mach
    n2 = p * (1.0 + g * M * M) - 0.5
    n5_scaled = 4.0 + d - p * math.sqrt(2.0 * math.pi * g * T) * M * (5.0 + d + g * M * M)
    log_T = math.log(T)
    first = (0.5 * (5.0 + d) * log_T - math.log(p) - 0.5) / SQRT_2PI
    # (sqrt(2 pi gamma) p M - sqrt(T)) / sqrt(2 pi T) = -N1-
    coef = (math.sqrt(2.0 * math.pi * g) * p * M - math.sqrt(T)) / math.sqrt(2.0 * math.pi * T)
    log_arg = (
        math.log(2.0)
        + (6.0 + d) * (0.5 * _LOG_PI + math.log(n2))
        + 0.5 * (5.0 + d) * log_T
        + log_delta_factor(s, ups, d)
        - theta_tilde(s, ups, d)
        - math.log(p)
        - (5.0 + d) * math.log(n5_scaled)
    )
    return first, coef * log_arg


def _recast_terms_mp(state: FarFieldState, gas: GasParams, s_guess: float):
    """Recast evaluated with mpmath; Upsilon and s are recomputed from the
    (exact) float inputs at a precision that resolves exp(-s**2)."""
    import mpmath

    ctx = mpmath.mp.clone()
    ctx.dps = 30 + int(s_guess * s_guess / 2.3)
    d = ctx.mpf(gas.delta)
    p, T, M = ctx.mpf(state.p), ctx.mpf(state.T), ctx.mpf(state.mach)
    g = (5 + d) / (3 + d)
    two_pi = 2 * ctx.pi
    n2 = p * (1 + g * M * M) - ctx.mpf(1) / 2
    n5_scaled = 4 + d - p * ctx.sqrt(two_pi * g * T) * M * (5 + d + g * M * M)
    ups = 2 * (1 - p * ctx.sqrt(two_pi * g / T) * M) * n5_scaled / (ctx.pi * (2 * n2) ** 2)

    low = mpmath.mp.clone()
    low.dps = 40

    def phi(s):
        # erfc(s) only enters through the exp(-s**2) correction, so its
        # scaled form is needed to 40 digits; a full-precision erfc at
        # thousands of digits is the slow part otherwise
        ls = low.mpf(s)
        e = ctx.exp(-s * s)
        i0 = ctx.sqrt(ctx.pi) / 2 * (2 - e * ctx.mpf(low.erfc(ls) * low.exp(ls * ls)))
        i1 = s * i0 + e / 2
        i2 = s * i1 + i0 / 2
        i3 = s * i2 + i1
        return i1 * (i3 + i1 * (1 + d / 2)) / (i2 * i2)

    s = ctx.findroot(lambda x: phi(x) - ups, ctx.mpf(s_guess), solver="secant")
    k = 2 * (4 + d) * ups
    r = ctx.sqrt(s * s + k)
    first_factor = ups + s * s * (2 * ups - 1) - s * r
    log_delta = ctx.log(first_factor) + (4 + d) * ctx.log(s + r)
    th_tilde = ctx.mpf(1) / 2 - (s * s + s * r) / (2 * ups)
    first = ((5 + d) / 2 * ctx.log(T) - ctx.log(p) - ctx.mpf(1) / 2) / ctx.sqrt(two_pi)
    coef = (ctx.sqrt(two_pi * g) * p * M - ctx.sqrt(T)) / ctx.sqrt(two_pi * T)
    log_arg = (
        ctx.log(2)
        + (6 + d) * (ctx.log(ctx.pi) / 2 + ctx.log(n2))
        + (5 + d) / 2 * ctx.log(T)
        + log_delta
        - th_tilde
        - ctx.log(p)
        - (5 + d) * ctx.log(n5_scaled)
    )
    return float(first), float(coef * log_arg), float(s)


def lambda_recast(state: FarFieldState, gas: GasParams, seed: float | None = None) -> LambdaBreakdown:
    _feasible_moments(state, gas)
    ups = upsilon(state, gas)
    s = solve_shape_parameter(ups, gas, seed=seed)
    if s > RECAST_MP_THRESHOLD:
        first, second, s = _recast_terms_mp(state, gas, s)
    else:
        first, second = _recast_terms(state, gas, ups, s)
    return LambdaBreakdown(first + second, first, 0.0, -second, ups, s, Form.RECAST)


def lambda_recast_first(state: FarFieldState, gas: GasParams) -> float:
    """The other printed recast (leading term L1 log(T^((5+delta)/2) / p)).

    Kept for cross-checking only.
    """
    nm = _feasible_moments(state, gas)
    g, d, p, T, M = gas.gamma, gas.delta, state.p, state.T, state.mach
    ups = upsilon(state, gas)
    s = solve_shape_parameter(ups, gas)
    l1 = p * math.sqrt(g / T) * M
    n1 = 1.0 / SQRT_2PI - l1
    log_arg = (
        0.5 * (5.0 + d) * math.log(2.0)
        + 0.5 * _LOG_PI
        + (5.0 + d) * math.log(n1)
        + log_delta_factor(s, ups, d)
        - theta_tilde(s, ups, d)
        - (4.0 + d) * math.log(2.0 * p * (1.0 + g * M * M) - 1.0)
        - (5.0 + d) * math.log(ups)
    )
    return l1 * (0.5 * (5.0 + d) * math.log(T) - math.log(p)) - 0.5 / SQRT_2PI - n1 * log_arg


def forms_agree(a: float, b: float) -> bool:
    scale = max(abs(a), abs(b))
    tol = CHECK_ATOL if scale < NEAR_ZERO else CHECK_RTOL * scale
    return abs(a - b) <= tol


def entropy_bound(state: FarFieldState, gas: GasParams, form: Form | str = Form.CHECKED, seed: float | None = None) -> LambdaBreakdown:
    """Lambda(p, T, M) in the requested form.

    ``form="checked"`` evaluates both forms and raises
    :class:`CrossCheckError` unless they agree (1e-8 relative, or 1e-10
    absolute when |Lambda| < 1e-2); the direct breakdown is returned.
    """
    try:
        form = Form(form)
    except ValueError:
        raise ContractViolation(f"unknown form {form!r}") from None
    if form is Form.DIRECT:
        return lambda_direct(state, gas, seed=seed)
    if form is Form.RECAST:
        return lambda_recast(state, gas, seed=seed)
    direct = lambda_direct(state, gas, seed=seed)
    recast = lambda_recast(state, gas, seed=direct.s)
    if not forms_agree(direct.value, recast.value):
        raise CrossCheckError(
            f"direct and recast Lambda disagree: {direct.value!r} vs {recast.value!r} "
            f"at p={state.p!r}, T={state.T!r}, M={state.mach!r}, delta={gas.delta!r}",
            direct.value,
            recast.value,
        )
    return direct


def lambda_value(p: float, T: float, mach: float, gas: GasParams, seed: float | None = None) -> float:
    """Direct-form Lambda as a bare float; raises on infeasible states."""
    return lambda_direct(FarFieldState(p, T, mach), gas, seed=seed).value
