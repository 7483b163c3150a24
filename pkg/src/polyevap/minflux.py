"""Minimal half-space entropy flux for prescribed half moments.

Among all distributions with given (N1, N2, N5) on the half space z > 0, the
entropy flux Psi_+ is minimized by a drifted Maxwellian

    f_M = 2**(delta/2) a beta**(3+delta) / (Gamma(delta/2) pi)
          * I**(delta/2 - 1) exp(-beta**2 ((z-w)**2 + r**2 + 2 I))

whose shape parameter s = beta*w solves Phi(s) = N1 N5 / N2**2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate, linalg, optimize, special

from . import kernels
from .errors import (
    ContractViolation,
    InfeasibleMomentsError,
    NumericalFailure,
    UnsupportedStandaloneError,
)
from .gas import GasParams, HalfMoments

SHAPE_RTOL = 1e-12
_S_CAP = 60.0
_LOG_2 = math.log(2.0)
_LOG_PI = math.log(math.pi)


def _seed(upsilon: float, delta: float) -> float:
    if upsilon >= kernels.shape_function(0.0, GasParams(delta)):
        return -math.sqrt(2.0 * upsilon / (2.0 + delta))
    return math.sqrt(0.5 * (3.0 + delta) / (upsilon - 1.0))


def _bracket(g, s0: float, step: float, limit: float):
    """Walk from s0 in the direction of the root of the decreasing function g
    until the sign changes. Returns (lo, hi) with g(lo) > 0 > g(hi)."""
    g0 = g(s0)
    if g0 == 0.0:
        return s0, s0
    direction = 1.0 if g0 > 0.0 else -1.0
    prev = s0
    while True:
        cur = prev + direction * step
        if abs(cur) > limit:
            raise NumericalFailure(
                f"shape bracket expansion left |s| <= {limit:g} without a sign change"
            )
        gc = g(cur)
        if gc == 0.0:
            return cur, cur
        if (gc > 0.0) != (g0 > 0.0):
            return (prev, cur) if direction > 0 else (cur, prev)
        prev = cur
        step *= 2.0


def solve_shape_parameter(upsilon: float, gas: GasParams, seed: float | None = None) -> float:
    """Unique root s of Phi(s) = upsilon.

    The bracket is seeded from the large-|s| asymptotes of Phi (or from
    ``seed`` if given), expanded geometrically and refined with Brent's
    method. Raises :class:`InfeasibleMomentsError` for upsilon <= 1.
    """
    upsilon = float(upsilon)
    if not upsilon > 1.0 or math.isinf(upsilon):
        raise InfeasibleMomentsError(
            f"shape equation needs 1 < upsilon < inf, got {upsilon!r}", "upsilon", upsilon
        )
    delta = gas.delta

    def g(s):
        return kernels.shape_function(s, gas) - upsilon

    s0 = _seed(upsilon, delta) if seed is None else float(seed)
    limit = max(_S_CAP, 4.0 * abs(s0))
    lo, hi = _bracket(g, s0, max(0.25, 0.05 * abs(s0)), limit)
    if lo == hi:
        s = lo
    else:
        s = optimize.brentq(g, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps, maxiter=200)
    resid = abs(kernels.shape_function(s, gas) - upsilon) / upsilon
    if resid > SHAPE_RTOL:
        raise NumericalFailure(
            f"shape equation residual {resid:.3e} exceeds {SHAPE_RTOL:g} at s={s!r}"
        )
    return s


@dataclass(frozen=True)
class ShapeSolution:
    """Constrained Maxwellian matching a set of half moments.

    ``log_a`` holds log(a); ``log_F_argument`` is F / N1, the logarithm of
    the argument in the closed form of the minimal flux (Gamma term removed).
    """

    s: float
    log_a: float
    beta: float
    w: float
    theta: float
    upsilon: float
    log_F_argument: float

    @property
    def a(self) -> float:
        return math.exp(self.log_a)


def _check_moments(moments: HalfMoments) -> None:
    for name in ("n1", "n2", "n5"):
        v = getattr(moments, name)
        if not v > 0.0 or math.isinf(v):
            raise InfeasibleMomentsError(
                f"half moment {name} must be positive and finite, got {v!r}", name, v
            )


def maxwellian_from_moments(moments: HalfMoments, gas: GasParams, seed: float | None = None) -> ShapeSolution:
    _check_moments(moments)
    n1, n2, n5 = moments.n1, moments.n2, moments.n5
    upsilon = n1 * n5 / (n2 * n2)
    s = solve_shape_parameter(upsilon, gas, seed=seed)
    log_scale, j = kernels._scaled_moments(s)
    r21 = j[2] / j[1]
    beta = (n1 / n2) * r21
    w = (n2 / n1) * s / r21
    log_a = 2.0 * math.log(n1) - math.log(n2) + math.log(j[2]) - 2.0 * math.log(j[1]) - log_scale
    th = kernels.theta(s)
    d = gas.delta
    # -log_scale - theta; for s < 0 both are about s**2, and
    # theta - s**2 = 1 - s I_2/I_1 avoids the cancellation
    tail = -(1.0 - s * r21) if s < 0.0 else -th
    # F/N1 + log Gamma(delta/2); log I_n = log J_n + log_scale
    log_arg = (
        (5.0 + d) * math.log(n1)
        - (4.0 + d) * math.log(n2)
        + 0.5 * d * _LOG_2
        + (4.0 + d) * math.log(j[2])
        - (5.0 + d) * math.log(j[1])
        - _LOG_PI
        - (1.0 + 0.5 * d)
        + tail
    )
    return ShapeSolution(s, log_a, beta, w, th, upsilon, log_arg)


def maxwellian_half_moments(log_a: float, beta: float, w: float, gas: GasParams) -> HalfMoments:
    """Forward map (a, beta, w) -> (N1, N2, N5) of the drifted Maxwellian."""
    s = beta * w
    log_scale, j = kernels._scaled_moments(s)
    c = math.exp(log_a + log_scale)
    n1 = c / beta * j[1]
    n2 = c / beta**2 * j[2]
    n5 = c / beta**3 * (j[3] + j[1] * (1.0 + 0.5 * gas.delta))
    return HalfMoments(n1, n2, n5)


@dataclass(frozen=True)
class MinFluxValue:
    f_value: float
    shape: ShapeSolution


def reduced_min_flux(moments: HalfMoments, gas: GasParams, seed: float | None = None) -> tuple[float, ShapeSolution]:
    """F(N) + N1 log Gamma(delta/2), finite for every delta >= 0.

    The Gamma term cancels in the entropy-production bound, which is why
    this is the quantity the bound is assembled from.
    """
    sol = maxwellian_from_moments(moments, gas, seed=seed)
    return moments.n1 * sol.log_F_argument, sol


def min_flux(moments: HalfMoments, gas: GasParams) -> MinFluxValue:
    """Minimal entropy flux F(N1, N2, N5) over distributions with these half moments.

    Only defined for delta > 0; at delta = 0 the log Gamma(delta/2) term
    diverges and callers should go through :func:`reduced_min_flux`.
    """
    if gas.delta == 0.0:
        raise UnsupportedStandaloneError(
            "F diverges at delta = 0; use reduced_min_flux (Gamma-cancelled form)"
        )
    f_red, sol = reduced_min_flux(moments, gas)
    return MinFluxValue(f_red - moments.n1 * math.lgamma(0.5 * gas.delta), sol)


# --- quadrature of Psi_+ (test oracle) --------------------------------------


@dataclass(frozen=True)
class MaxwellianComponent:
    """One drifted Maxwellian of the minimizer family, weight included in ``log_a``."""

    log_a: float
    beta: float
    w: float

    @classmethod
    def from_shape(cls, sol: ShapeSolution) -> "MaxwellianComponent":
        return cls(sol.log_a, sol.beta, sol.w)


def mixture_half_moments(components: Sequence[MaxwellianComponent], gas: GasParams) -> HalfMoments:
    n1 = n2 = n5 = 0.0
    for c in components:
        m = maxwellian_half_moments(c.log_a, c.beta, c.w, gas)
        n1 += m.n1
        n2 += m.n2
        n5 += m.n5
    return HalfMoments(n1, n2, n5)


@lru_cache(maxsize=32)
def _laguerre_rule(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and log weights of the n-point rule for x**alpha exp(-x) on (0, inf).

    Golub-Welsch on the Jacobi matrix; scipy's three-term evaluation
    overflows beyond a few hundred nodes.
    """
    k = np.arange(n, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    t, v = linalg.eigh_tridiagonal(diag, off)
    with np.errstate(divide="ignore"):
        log_w = math.lgamma(alpha + 1.0) + 2.0 * np.log(np.abs(v[0]))
    return t, log_w


def psi_plus_quadrature(
    components: Sequence[MaxwellianComponent] | MaxwellianComponent,
    gas: GasParams,
    atol: float = 1e-10,
    max_nodes: int = 1024,
) -> float:
    """Psi_+(f) = 2 pi int z r f log(I**(1-delta/2) f) dz dr dI by quadrature.

    ``f`` is a sum of drifted Maxwellians. The integrand depends on r and I
    only through e = r**2 + 2 I, which leaves a single integral in e with
    weight e**(delta/2). Each component's share is integrated with a
    generalized Gauss-Laguerre rule at its own rate beta_k**2, doubling the
    node count until two totals agree to ``atol``; the z axis uses adaptive
    Gauss-Kronrod (QUADPACK).
    """
    if isinstance(components, MaxwellianComponent):
        components = [components]
    components = list(components)
    if not components:
        raise ContractViolation("need at least one Maxwellian component")
    d = gas.delta
    if d <= 0.0:
        raise ContractViolation("Psi_+ quadrature needs delta > 0")
    h = 0.5 * d
    log_c = np.array(
        [h * _LOG_2 + c.log_a + (3.0 + d) * math.log(c.beta) - math.lgamma(h) - _LOG_PI for c in components]
    )
    b2 = np.array([c.beta**2 for c in components])
    w = np.array([c.w for c in components])
    z_hi = float(max(max(c.w, 0.0) + 12.0 / c.beta for c in components))
    z_mid = sorted({c.w for c in components if 0.0 < c.w < z_hi})
    # int_0^{e/2} I^(h-1) dI = (e/2)^h / h
    log_pref = -h * _LOG_2 - math.log(h)

    def total(n):
        t, lw = _laguerre_rule(n, h)
        # nodes e[k, i] for component k; log weights fold in the rate scaling
        e = t[None, :] / b2[:, None]
        log_wt = lw[None, :] - (h + 1.0) * np.log(b2)[:, None]

        def fz(z):
            zz = (z - w) ** 2
            lg = special.logsumexp(log_c[:, None, None] - b2[:, None, None] * (zz[:, None, None] + e[None]), axis=0)
            own = log_c - b2 * zz
            return z * float(np.sum(np.exp(own[:, None] + log_wt + log_pref) * lg))

        val, _ = integrate.quad(fz, 0.0, z_hi, points=z_mid or None, epsabs=0.1 * atol, epsrel=1e-13, limit=400)
        return math.pi * val

    n = 32
    prev = total(n)
    change = math.inf
    while n < max_nodes:
        n *= 2
        cur = total(n)
        change = abs(cur - prev)
        if change <= atol:
            return cur
        prev = cur
    raise NumericalFailure(
        f"Psi_+ quadrature did not settle to {atol:g} with {max_nodes} nodes (last change {change:.3g})"
    )
