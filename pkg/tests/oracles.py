"""Independent reference computations shared by the test modules.

Nothing here calls the closed forms under test: moments come from
arbitrary-precision quadrature, admissibility from the inequalities as
written, and random states from a fixed-seed generator.
"""
from __future__ import annotations

import math
from functools import lru_cache

import mpmath
import numpy as np

from polyevap.gas import FarFieldState, GasParams
from polyevap.entropy import _feasible_moments
from polyevap.errors import InfeasibleMomentsError
from polyevap.minflux import MaxwellianComponent

S_GRID = [round(-30.0 + 0.5 * k, 10) for k in range(121)]
DELTAS = (0.0, 2.0, 3.0, 5.0)


@lru_cache(maxsize=None)
def mp_log_half_gauss(n: int, s: float) -> float:
    """log I_n(s) by tanh-sinh quadrature at 40 digits.

    For s < 0 the integrand is written as z**n exp(-z**2 + 2 s z) times
    exp(-s**2), which keeps the quadrature well scaled in the tail.
    """
    with mpmath.workdps(40):
        sm = mpmath.mpf(s)
        if s < 0:
            # mass sits within a few 1/|s| of the origin
            h = 1 / abs(sm)
            pts = [0, h, 4 * h, 16 * h, 64 * h + 10, mpmath.inf]
            val = mpmath.quad(lambda z: z**n * mpmath.exp(-z * z + 2 * sm * z), pts)
            return float(mpmath.log(val) - sm * sm)
        pts = [0, max(sm - 10, 0), sm, sm + 10, mpmath.inf]
        pts = sorted(set(pts), key=lambda x: float(x))
        val = mpmath.quad(lambda z: z**n * mpmath.exp(-(z - sm) ** 2), pts)
        return float(mpmath.log(val))


def displayed_overall(st: FarFieldState, gas: GasParams) -> bool:
    return st.p >= 1.0 / (2.0 * (1.0 + gas.gamma * st.mach**2))


def displayed_evaporation(st: FarFieldState, gas: GasParams) -> tuple[bool, bool, bool]:
    g, d, p, T, M = gas.gamma, gas.delta, st.p, st.T, st.mach
    a = M <= math.sqrt(T) / (math.sqrt(2 * math.pi * g) * p)
    b = M * (3 + d + M * M) <= (4 + d) / (g * math.sqrt(2 * math.pi * g)) / (p * math.sqrt(T))
    c = p <= (1 + M * M / (3 + d)) ** (-(5 + d) / 2)
    return a, b, c


def random_states(rng: np.random.Generator, n: int) -> list[FarFieldState]:
    ps = np.exp(rng.uniform(math.log(0.05), math.log(7.0), n))
    ts = rng.uniform(0.1, 3.0, n)
    ms = rng.uniform(-2.5, 1.75, n)
    return [FarFieldState(float(p), float(t), float(m)) for p, t, m in zip(ps, ts, ms)]


def is_feasible(st: FarFieldState, gas: GasParams) -> bool:
    try:
        _feasible_moments(st, gas)
    except InfeasibleMomentsError:
        return False
    return True


def random_feasible_states(seed: int, n: int, gas: GasParams) -> list[FarFieldState]:
    rng = np.random.default_rng(seed)
    out: list[FarFieldState] = []
    while len(out) < n:
        out.extend(st for st in random_states(rng, 4 * n) if is_feasible(st, gas))
    return out[:n]


def mp_psi_plus(components, delta: float, dps: int = 15) -> float:
    """Psi_+ of a Maxwellian mixture by nested tanh-sinh quadrature.

    Written directly from the density: with e = r**2 + 2 I the (r, I)
    measure collapses to (e/2)**(delta/2) / (delta/2) de, leaving a double
    integral in (z, e) that mpmath evaluates without any Laguerre rule.
    """
    with mpmath.workdps(dps):
        h = mpmath.mpf(delta) / 2
        cs = [
            (
                mpmath.mpf(c.log_a) + h * mpmath.log(2) + (3 + delta) * mpmath.log(c.beta) - mpmath.loggamma(h) - mpmath.log(mpmath.pi),
                mpmath.mpf(c.beta) ** 2,
                mpmath.mpf(c.w),
            )
            for c in components
        ]

        def glogg(z, e):
            g = mpmath.fsum(mpmath.exp(lc - b2 * ((z - w) ** 2 + e)) for lc, b2, w in cs)
            return g * mpmath.log(g) if g > 0 else mpmath.mpf(0)

        def inner(z):
            return mpmath.quad(lambda e: (e / 2) ** h / h * glogg(z, e), [0, 1, 4, 16, 64])

        zs = sorted({0.0, 20.0, *(float(w) for _, _, w in cs if 0 < w < 20)})
        return float(mpmath.pi * mpmath.quad(lambda z: z * inner(z), zs))


def random_mixtures(seed: int, n: int):
    """Two-component mixtures with beta in [0.6, 1.8], drift in [-1.5, 1.5]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        wt = rng.uniform(0.05, 0.95)
        b1, b2 = rng.uniform(0.6, 1.8, 2)
        w1, w2 = rng.uniform(-1.5, 1.5, 2)
        out.append([MaxwellianComponent(math.log(wt), b1, w1), MaxwellianComponent(math.log(1 - wt), b2, w2)])
    return out
