"""Maps of the region where the entropy-production bound is nonnegative.

Evaporation (M > 0): for each Mach number, the point (p#, T#) maximizing
Lambda over (p, T). Condensation (M < 0): for each (T, M), the pressure p*
maximizing Lambda over p. The boundary surface Lambda = 0 is extracted as
p-intervals per (T, M) cell.

Infeasible probes (impinging moments not positive, or Upsilon <= 1) score
-inf, so the optimizers never leave the region where Lambda is defined.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy import optimize

from .admissibility import check_all
from .entropy import lambda_direct
from .errors import (
    ContractViolation,
    InfeasibleMomentsError,
    NoFeasiblePointError,
    NumericalFailure,
    SearchBoundError,
)
from .gas import FarFieldState, GasParams

log = logging.getLogger(__name__)

DEFAULT_EVAP_BOX = ((0.02, 3.0), (0.1, 3.0))
CONDENSATION_P_CAP = 7.0
GRAD_TOL = 1e-4
FD_STEP = 1e-6


def default_mach_grid_evaporation() -> np.ndarray:
    return np.round(np.arange(0, 176) * 0.01, 10)


def default_mach_grid_condensation() -> np.ndarray:
    return np.round(-2.5 + np.arange(0, 250) * 0.01, 10)


def default_t_grid() -> np.ndarray:
    return np.round(0.1 + np.arange(0, 59) * 0.05, 10)


def safe_lambda(p: float, T: float, mach: float, gas: GasParams) -> float:
    """Lambda, or -inf where it is undefined (including p, T <= 0)."""
    if not (p > 0.0 and T > 0.0):
        return -math.inf
    try:
        return lambda_direct(FarFieldState(p, T, mach), gas).value
    except InfeasibleMomentsError:
        return -math.inf


@dataclass(frozen=True)
class CurvePoint:
    mach: float
    p_sharp: float
    t_sharp: float
    lambda_max: float
    # optimum sits on the search box or a feasibility wall
    boundary: bool = False


@dataclass
class Curve:
    points: list[CurvePoint] = field(default_factory=list)
    # mach values whose best Lambda was negative (or that had no feasible point)
    excluded: list[float] = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def _grad_norm(f, x: Sequence[float], h: float = FD_STEP) -> float:
    g = []
    for k in range(len(x)):
        xp = list(x)
        xm = list(x)
        xp[k] += h
        xm[k] -= h
        fp, fm = f(xp), f(xm)
        if not (math.isfinite(fp) and math.isfinite(fm)):
            return math.inf
        g.append((fp - fm) / (2.0 * h))
    return math.hypot(*g)


def _scan_pt(mach, gas, box, n):
    (p_lo, p_hi), (t_lo, t_hi) = box
    ps = np.geomspace(p_lo, p_hi, n)
    ts = np.geomspace(t_lo, t_hi, n)
    best = (-math.inf, None)
    for p in ps:
        for t in ts:
            v = safe_lambda(float(p), float(t), mach, gas)
            if v > best[0]:
                best = (v, (float(p), float(t)))
    return best, (ps[1] / ps[0], ts[1] / ts[0])


def _in_box(x, box):
    (p_lo, p_hi), (t_lo, t_hi) = box
    return p_lo <= x[0] <= p_hi and t_lo <= x[1] <= t_hi


def maximize_lambda_pt(
    mach: float,
    gas: GasParams,
    search_box=DEFAULT_EVAP_BOX,
    start: Optional[tuple[float, float]] = None,
    grid: int = 41,
) -> CurvePoint:
    """max over (p, T) of Lambda(p, T, mach) for evaporation.

    A coarse log-spaced scan of ``search_box`` (skipped when ``start`` is
    given) seeds a Nelder-Mead refinement, repeated until the simplex is
    smaller than 1e-8 in both coordinates.
    """
    if not mach >= 0.0:
        raise ContractViolation(f"evaporation maximization needs mach >= 0, got {mach!r}")
    if mach == 0.0:
        # Lambda(p, T, 0) does not depend on T; the stationary state is the
        # only admissible one
        return CurvePoint(0.0, 1.0, 1.0, 0.0, False)

    def neg(x):
        if not _in_box(x, search_box):
            return math.inf
        return -safe_lambda(float(x[0]), float(x[1]), mach, gas)

    if start is None or not math.isfinite(neg(start)):
        (v0, x0), ratios = _scan_pt(mach, gas, search_box, grid)
        if x0 is None:
            raise NoFeasiblePointError(f"no feasible (p, T) in {search_box} at M={mach!r}")
        steps = (x0[0] * (ratios[0] - 1.0), x0[1] * (ratios[1] - 1.0))
    else:
        x0 = (float(start[0]), float(start[1]))
        steps = (0.02 * x0[0], 0.02 * x0[1])

    x = np.array(x0, dtype=float)
    for _ in range(6):
        simplex = np.array([x, x + [steps[0], 0.0], x + [0.0, steps[1]]])
        res = optimize.minimize(
            neg,
            x,
            method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": 1e-10, "fatol": 1e-15, "maxiter": 20000, "maxfev": 20000},
        )
        sim = res.final_simplex[0]
        width = np.ptp(sim, axis=0)
        x = sim[0]
        if np.all(width < 1e-8):
            break
        steps = (max(width[0], 1e-7), max(width[1], 1e-7))
    else:
        raise NumericalFailure(f"simplex did not contract below 1e-8 at M={mach!r}")
    lam = -neg(x)
    boundary = _grad_norm(neg, x) > GRAD_TOL
    return CurvePoint(float(mach), float(x[0]), float(x[1]), float(lam), bool(boundary))


def evaporation_curve(gas: GasParams, mach_grid: Iterable[float], search_box=DEFAULT_EVAP_BOX) -> Curve:
    """Maximal-entropy-production curve p#(M), T#(M).

    Each maximization is warm-started from the previous optimum; when the
    maximum drops by more than 10 % relative to the neighbour a cold scan
    is run as well and the better optimum kept.
    """
    grid = [float(m) for m in mach_grid]
    if not grid:
        raise ContractViolation("mach grid is empty")
    out = Curve()
    prev: Optional[CurvePoint] = None
    for m in grid:
        try:
            start = None if prev is None or prev.mach == 0.0 else (prev.p_sharp, prev.t_sharp)
            pt = maximize_lambda_pt(m, gas, search_box, start=start)
            if start is not None and prev.lambda_max > 0.0 and pt.lambda_max < 0.9 * prev.lambda_max:
                cold = maximize_lambda_pt(m, gas, search_box)
                if cold.lambda_max > pt.lambda_max:
                    pt = cold
        except NoFeasiblePointError:
            out.excluded.append(m)
            continue
        prev = pt
        if pt.lambda_max >= 0.0:
            out.points.append(pt)
        else:
            out.excluded.append(m)
    return out


def max_lambda_at_mach(mach: float, gas: GasParams, search_box=DEFAULT_EVAP_BOX) -> float:
    try:
        return maximize_lambda_pt(mach, gas, search_box).lambda_max
    except NoFeasiblePointError:
        return -math.inf


def max_positive_mach(gas: GasParams, upper: float = 3.0, tol: float = 1e-3, search_box=DEFAULT_EVAP_BOX) -> float:
    """Largest evaporation Mach number for which max_{p,T} Lambda >= 0 (bisection)."""
    if max_lambda_at_mach(upper, gas, search_box) >= 0.0:
        raise SearchBoundError(f"max Lambda still nonnegative at the probe bound M={upper!r}")
    lo, hi = 0.0, float(upper)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if max_lambda_at_mach(mid, gas, search_box) >= 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def admissible_region_mach_limit(gas: GasParams, upper: float = 10.0, tol: float = 1e-10) -> float:
    """Largest M > 0 for which some (p, T) meets the overall and evaporation
    conditions (a)-(c); a diagnostic companion to :func:`max_positive_mach`.

    (a) and (b) combine into a T-free cap on p, the others are T-free already.
    """
    g, d = gas.gamma, gas.delta

    def slack(m):
        p_min = 1.0 / (2.0 * (1.0 + g * m * m))
        p_ab = math.sqrt((4.0 + d) / (2.0 * math.pi * g * m * m * (5.0 + d + g * m * m)))
        p_c = (1.0 + m * m / (3.0 + d)) ** (-(5.0 + d) / 2.0)
        return min(p_ab, p_c) - p_min

    if slack(upper) >= 0.0:
        raise SearchBoundError(f"admissible region still nonempty at M={upper!r}")
    return optimize.brentq(slack, 1e-6, upper, xtol=tol)


# --- condensation -----------------------------------------------------------


@dataclass(frozen=True)
class SurfaceSample:
    mach: float
    temperature: float
    p_star: float
    lambda_max: float
    boundary: bool = False


@dataclass
class Surface:
    samples: list[SurfaceSample] = field(default_factory=list)
    missing: list[tuple[float, float]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)


def _p_floor(mach: float, gas: GasParams) -> float:
    # below this N2- <= 0
    return 1.0 / (2.0 * (1.0 + gas.gamma * mach * mach))


def maximize_lambda_p(
    temperature: float,
    mach: float,
    gas: GasParams,
    p_bounds: Optional[tuple[float, float]] = None,
    start: Optional[float] = None,
    scan_points: int = 80,
) -> SurfaceSample:
    """max over p of Lambda(p, T, mach) for condensation.

    A log-spaced scan over ``p_bounds`` (default: from the N2- = 0 wall up
    to p = 7) brackets the best feasible point, then a bounded Brent search
    (golden section with parabolic steps) refines it to 1e-10 in p.
    """
    if not mach < 0.0:
        raise ContractViolation(f"condensation maximization needs mach < 0, got {mach!r}")
    lo, hi = p_bounds if p_bounds is not None else (_p_floor(mach, gas) * (1.0 + 1e-12), CONDENSATION_P_CAP)
    return _maximize_p(temperature, mach, gas, lo, hi, start, scan_points)


def _finite_neg(f):
    # Brent's parabolic step breaks on infinities; infeasible points become a large penalty
    def g(p):
        v = f(p)
        return -v if math.isfinite(v) else 1e300

    return g


def _maximize_p(temperature, mach, gas, lo, hi, start=None, scan_points=80) -> SurfaceSample:
    if not temperature > 0.0:
        raise ContractViolation(f"temperature must be positive, got {temperature!r}")
    if not 0.0 < lo < hi:
        raise ContractViolation(f"bad p bounds ({lo!r}, {hi!r})")

    def f(p):
        return safe_lambda(float(p), temperature, mach, gas)

    def scan(a, b, n):
        ps = np.geomspace(a, b, n)
        vals = np.array([f(p) for p in ps])
        return ps, vals

    ps = vals = None
    if start is not None and lo < start < hi:
        ps, vals = scan(max(lo, start / 1.25), min(hi, start * 1.25), 11)
        k = int(np.argmax(vals))
        # the local window must enclose an interior maximum, else rescan
        if not np.isfinite(vals[k]) or (k in (0, len(ps) - 1) and ps[k] not in (lo, hi)):
            ps = None
    if ps is None:
        ps, vals = scan(lo, hi, scan_points)
    k = int(np.argmax(vals))
    if not np.isfinite(vals[k]):
        raise NoFeasiblePointError(f"no feasible p in [{lo:g}, {hi:g}] at T={temperature!r}, M={mach!r}")
    a = ps[max(k - 1, 0)]
    b = ps[min(k + 1, len(ps) - 1)]
    res = optimize.minimize_scalar(_finite_neg(f), bounds=(a, b), method="bounded", options={"xatol": 1e-10, "maxiter": 500})
    p_star, lam = float(res.x), float(-res.fun)
    if vals[k] > lam:
        p_star, lam = float(ps[k]), float(vals[k])
    boundary = _grad_norm(lambda x: -f(x[0]), [p_star]) > GRAD_TOL or p_star >= hi * (1.0 - 1e-9) or p_star <= lo * (1.0 + 1e-9)
    return SurfaceSample(float(mach), float(temperature), p_star, lam, bool(boundary))


def condensation_surface(gas: GasParams, t_grid: Iterable[float], mach_grid: Iterable[float], p_bounds=None) -> Surface:
    """Maximal-entropy-production surface p*(T, M), row-major in T.

    Along each T row the search is warm-started from the neighbouring Mach
    cell; a drop of more than 10 % in the maximum triggers a full rescan.
    """
    ts = [float(t) for t in t_grid]
    ms = [float(m) for m in mach_grid]
    if not ts or not ms:
        raise ContractViolation("grids must be nonempty")
    if any(m >= 0.0 for m in ms):
        raise ContractViolation("condensation Mach numbers must be negative")
    out = Surface()
    for t in ts:
        prev: Optional[SurfaceSample] = None
        for m in ms:
            try:
                smp = maximize_lambda_p(t, m, gas, p_bounds, start=None if prev is None else prev.p_star)
                if prev is not None and prev.lambda_max > 0.0 and smp.lambda_max < 0.9 * prev.lambda_max:
                    cold = maximize_lambda_p(t, m, gas, p_bounds)
                    if cold.lambda_max > smp.lambda_max:
                        smp = cold
            except NoFeasiblePointError:
                out.missing.append((t, m))
                prev = None
                continue
            out.samples.append(smp)
            prev = smp
    return out


# --- boundary surface Lambda = 0 --------------------------------------------


@dataclass(frozen=True)
class BoundarySample:
    mach: float
    temperature: float
    p_lower: float
    p_upper: float


BOUNDARY_LAMBDA_TOL = 1e-10
PINCH_TOL = 1e-3


def _admissible(p, T, mach, gas):
    return check_all(FarFieldState(p, T, mach), gas).admissible


def _zero_crossing(f, p_out: float, p_in: float) -> float:
    """Root of f between p_out (f <= 0 or undefined) and p_in (f > 0)."""
    a, b = p_out, p_in
    fa = f(a)
    for _ in range(200):
        if math.isfinite(fa):
            break
        mid = math.sqrt(a * b)
        fm = f(mid)
        if fm > 0.0:
            b = mid
        else:
            a, fa = mid, fm
        if abs(b - a) <= 1e-15 * b:
            return b
    if fa == 0.0:
        return a
    return optimize.brentq(f, a, b, xtol=1e-15, rtol=4.0 * np.finfo(float).eps, maxiter=200)


def boundary_cell(
    temperature: float,
    mach: float,
    gas: GasParams,
    p_min: float = 0.02,
    p_max: float = CONDENSATION_P_CAP,
    p_points: int = 400,
) -> list[BoundarySample]:
    """Connected p-intervals of {Lambda > 0} within the admissible set at (T, M)."""
    if mach == 0.0:
        # only the stationary state survives the M = 0 necessary condition
        if abs(temperature - 1.0) <= PINCH_TOL:
            return [BoundarySample(0.0, float(temperature), 1.0, 1.0)]
        return []

    def f(p):
        return safe_lambda(p, temperature, mach, gas)

    ps = np.geomspace(p_min, p_max, p_points)
    # a positive interval can be narrower than the scan spacing, so the
    # maximizer over p is added to the scan points
    try:
        best = _maximize_p(temperature, mach, gas, p_min, p_max).p_star
        ps = np.unique(np.append(ps, best))
    except NoFeasiblePointError:
        pass
    vals = np.array([f(float(p)) for p in ps])
    inside = np.array([v > 0.0 and _admissible(float(p), temperature, mach, gas) for p, v in zip(ps, vals)])
    if np.any((vals > 0.0) & ~inside):
        log.warning("Lambda > 0 at inadmissible points (T=%g, M=%g, delta=%g)", temperature, mach, gas.delta)
    out = []
    k = 0
    n = len(ps)
    while k < n:
        if not inside[k]:
            k += 1
            continue
        j = k
        while j + 1 < n and inside[j + 1]:
            j += 1
        lower = float(ps[k]) if k == 0 else _zero_crossing(f, float(ps[k - 1]), float(ps[k]))
        upper = float(ps[j]) if j == n - 1 else _zero_crossing(f, float(ps[j + 1]), float(ps[j]))
        out.append(BoundarySample(float(mach), float(temperature), lower, upper))
        k = j + 1
    return out


def boundary_surface(gas: GasParams, t_grid: Iterable[float], mach_grid: Iterable[float], p_min: float = 0.02, p_max: float = CONDENSATION_P_CAP, p_points: int = 400) -> list[BoundarySample]:
    """Cross sections of the surface Lambda = 0, one row per positive p-interval.

    Cells without a positive interval produce no rows.
    """
    ts = [float(t) for t in t_grid]
    ms = [float(m) for m in mach_grid]
    if not ts or not ms:
        raise ContractViolation("grids must be nonempty")
    rows = []
    for t in ts:
        for m in ms:
            rows.extend(boundary_cell(t, m, gas, p_min, p_max, p_points))
    return rows
