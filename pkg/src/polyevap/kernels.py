"""Half-Gaussian moment integrals and the functions built on them.

    I_n(s) = int_0^inf z**n exp(-(z - s)**2) dz,   n = 0..5

For s < 0 every I_n carries the factor exp(-s**2); it is kept apart as a log
scale so that moments, their ratios and their logarithms stay finite deep in
the tail (s = -30 and beyond).

Two evaluation paths are used:

* s >= -1.5: closed forms I_n = P_n(s) I_0 + Q_n(s) exp(-s**2) with
  I_0 = sqrt(pi)/2 erfc(-s). All terms are positive for s >= 0 and the
  cancellation for -1.5 <= s < 0 costs at most two digits.
* s < -1.5: the closed forms cancel catastrophically (about s**10 for n = 5),
  so the ratios I_n / I_{n-1} are taken from the backward continued fraction
  of the recursion I_n = s I_{n-1} + (n-1)/2 I_{n-2}, whose positive
  solution is the minimal one. I_0 comes from the scaled erfc.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.special import erfcx

from .errors import ContractViolation
from .gas import GasParams

SQRT_PI = math.sqrt(math.pi)
_CF_THRESHOLD = -1.5


@dataclass(frozen=True)
class ScaledMoment:
    """Positive real stored as ``mantissa * exp(log_scale)``.

    ``mantissa`` lies in [1, e) and ``log_scale`` is an integer-valued float,
    so values far below the double range are representable.
    """

    mantissa: float
    log_scale: float

    @classmethod
    def from_log(cls, log_value: float) -> "ScaledMoment":
        if log_value == -math.inf:
            return cls(0.0, 0.0)
        k = math.floor(log_value)
        return cls(math.exp(log_value - k), float(k))

    def log(self) -> float:
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(self.mantissa) + self.log_scale

    @property
    def value(self) -> float:
        """Plain float value; underflows to 0.0 in the deep tail."""
        if self.mantissa == 0.0:
            return 0.0
        try:
            return self.mantissa * math.exp(self.log_scale)
        except OverflowError:
            return math.inf


def _cf_depth(x: float) -> int:
    # tuned against 50-digit quadrature: full double precision for x >= 1.5
    return 24 + int(360.0 / (x * x))


@lru_cache(maxsize=8192)
def _scaled_moments(s: float) -> tuple[float, tuple[float, ...]]:
    """Return ``(log_scale, (J_0, ..., J_5))`` with I_n(s) = J_n exp(log_scale)."""
    if s < _CF_THRESHOLD:
        x = -s
        rho = 0.0
        ratios = [0.0] * 6
        for k in range(_cf_depth(x), 0, -1):
            rho = 0.5 * k / (x + rho)
            if k <= 5:
                ratios[k] = rho
        j = [0.5 * SQRT_PI * float(erfcx(x))]
        for k in range(1, 6):
            j.append(j[-1] * ratios[k])
        return -s * s, tuple(j)

    if s < 0.0:
        log_scale = -s * s
        j0 = 0.5 * SQRT_PI * float(erfcx(-s))
        e = 1.0
    else:
        log_scale = 0.0
        j0 = 0.5 * SQRT_PI * math.erfc(-s)
        e = math.exp(-s * s)
    s2 = s * s
    j1 = s * j0 + 0.5 * e
    j2 = (s2 + 0.5) * j0 + 0.5 * s * e
    j3 = (s2 * s + 1.5 * s) * j0 + 0.5 * (s2 + 1.0) * e
    j4 = (s2 * s2 + 3.0 * s2 + 0.75) * j0 + (0.5 * s2 * s + 1.25 * s) * e
    j5 = (s2 * s2 * s + 5.0 * s2 * s + 3.75 * s) * j0 + (0.5 * s2 * s2 + 2.25 * s2 + 1.0) * e
    return log_scale, (j0, j1, j2, j3, j4, j5)


def _check_s(s) -> float:
    s = float(s)
    if not math.isfinite(s):
        raise ContractViolation(f"s must be finite, got {s!r}")
    return s


def half_gauss_moment(n: int, s: float) -> ScaledMoment:
    """I_n(s) for 0 <= n <= 5 as a :class:`ScaledMoment`.

    >>> round(half_gauss_moment(1, 0.0).value, 12)
    0.5
    """
    if n not in range(6):
        raise ContractViolation(f"moment order must be in 0..5, got {n!r}")
    log_scale, j = _scaled_moments(_check_s(s))
    return ScaledMoment.from_log(math.log(j[n]) + log_scale)


def log_half_gauss_moment(n: int, s: float) -> float:
    if n not in range(6):
        raise ContractViolation(f"moment order must be in 0..5, got {n!r}")
    log_scale, j = _scaled_moments(_check_s(s))
    return math.log(j[n]) + log_scale


def moment_ratio(num_n: int, den_n: int, s: float) -> float:
    """I_num(s) / I_den(s) with the common exp(-s**2) factor cancelled."""
    for n in (num_n, den_n):
        if n not in range(6):
            raise ContractViolation(f"moment order must be in 0..5, got {n!r}")
    _, j = _scaled_moments(_check_s(s))
    return j[num_n] / j[den_n]


def theta(s: float) -> float:
    """theta(s) = (s I_0 + exp(-s^2)) / (2 s I_0 + exp(-s^2)), always > 1/2."""
    s = _check_s(s)
    log_scale, j = _scaled_moments(s)
    if s >= 0.0:
        return 0.5 + math.exp(-s * s) / (4.0 * j[1])
    return 1.0 - s * j[0] / (2.0 * j[1])


def shape_function(s: float, gas: GasParams) -> float:
    """Phi(s) = I_1 (I_3 + (1 + delta/2) I_1) / I_2**2.

    Strictly decreasing from +inf (s -> -inf) to 1 (s -> +inf).
    """
    _, j = _scaled_moments(_check_s(s))
    q = j[1] / j[2]
    return q * (j[3] / j[2]) + (1.0 + 0.5 * gas.delta) * q * q
