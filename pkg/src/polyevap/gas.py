"""Gas parameters, far-field states and half-moment bookkeeping.

Units are normalized once and for all: m = k_B = 1 and the interface
Maxwellian has n0 = T0 = p0 = 1, so every public quantity is a ratio to the
interface value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import ContractViolation

SQRT_2PI = math.sqrt(2.0 * math.pi)


def heat_capacity_ratio(delta: float) -> float:
    """Ratio of specific heats (5 + delta) / (3 + delta)."""
    if not (delta >= 0.0) or math.isinf(delta):
        raise ContractViolation(f"delta must be finite and >= 0, got {delta!r}")
    return (5.0 + delta) / (3.0 + delta)


@dataclass(frozen=True)
class GasParams:
    """Polyatomic gas with ``delta`` internal degrees of freedom."""

    delta: float

    def __post_init__(self):
        # validates and caches gamma
        object.__setattr__(self, "gamma", heat_capacity_ratio(float(self.delta)))

    @property
    def monatomic(self) -> bool:
        return self.delta == 0.0


@dataclass(frozen=True)
class FarFieldState:
    """Normalized far-field triple: p = p_inf/p0, T = T_inf/T0, Mach number.

    ``mach > 0`` is evaporation, ``mach < 0`` condensation.
    """

    p: float
    T: float
    mach: float

    def __post_init__(self):
        for name in ("p", "T"):
            v = getattr(self, name)
            if not (v > 0.0) or math.isinf(v):
                raise ContractViolation(f"{name} must be finite and positive, got {v!r}")
        if not math.isfinite(self.mach):
            raise ContractViolation(f"mach must be finite, got {self.mach!r}")


@dataclass(frozen=True)
class HalfMoments:
    n1: float
    n2: float
    n5: float

    @property
    def upsilon(self) -> float:
        """The shape invariant n1*n5/n2**2."""
        return self.n1 * self.n5 / (self.n2 * self.n2)

    def scaled(self, factor: float) -> "HalfMoments":
        return HalfMoments(factor * self.n1, factor * self.n2, factor * self.n5)


@dataclass(frozen=True)
class FluxMoments:
    """Conserved fluxes of mass, normal momentum, transverse momenta and energy."""

    l1: float
    l2: float
    l3: float
    l4: float
    l5: float


def boundary_half_moments(gas: GasParams) -> HalfMoments:
    """Half moments carried away from the interface by the normalized
    interface Maxwellian."""
    return HalfMoments(1.0 / SQRT_2PI, 0.5, (4.0 + gas.delta) / SQRT_2PI)


def flux_moments(state: FarFieldState, gas: GasParams) -> FluxMoments:
    g, M, p, T = gas.gamma, state.mach, state.p, state.T
    l1 = p * math.sqrt(g / T) * M
    l2 = p * (1.0 + g * M * M)
    l5 = p * math.sqrt(g * T) * M * (5.0 + gas.delta + g * M * M)
    return FluxMoments(l1, l2, 0.0, 0.0, l5)


def incoming_half_moments(state: FarFieldState, gas: GasParams) -> HalfMoments:
    """Half moments of molecules impinging on the interface.

    Obtained from the boundary values and the conserved fluxes; no sign
    constraint is imposed (see :mod:`polyevap.admissibility`).
    """
    b = boundary_half_moments(gas)
    fl = flux_moments(state, gas)
    return HalfMoments(b.n1 - fl.l1, fl.l2 - b.n2, b.n5 - fl.l5)


class Regime(str, Enum):
    SUPERSONIC_EVAPORATION = "supersonic_evaporation"
    SONIC_EVAPORATION = "sonic_evaporation"
    SUBSONIC_EVAPORATION = "subsonic_evaporation"
    REST = "rest"
    SUBSONIC_CONDENSATION = "subsonic_condensation"
    SONIC_CONDENSATION = "sonic_condensation"
    SUPERSONIC_CONDENSATION = "supersonic_condensation"


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    k_plus: int
    l_zero: int
    # None for the degenerate cases M in {0, +1, -1}
    free_parameters: Optional[int]

    @property
    def degenerate(self) -> bool:
        return self.l_zero > 0

    @property
    def k_minus(self) -> int:
        return 5 - self.k_plus - self.l_zero


def classify_regime(mach: float) -> RegimeReport:
    """Signature of the linearized half-space problem at Mach number ``mach``.

    Counts the positive and zero entries of {u-c, u, u, u, u+c}, working in
    units of the sound speed so that no temperature enters.
    """
    if not math.isfinite(mach):
        raise ContractViolation(f"mach must be finite, got {mach!r}")
    speeds = (mach - 1.0, mach, mach, mach, mach + 1.0)
    k_plus = sum(1 for v in speeds if v > 0.0)
    l_zero = sum(1 for v in speeds if v == 0.0)
    if mach > 1.0:
        regime, free = Regime.SUPERSONIC_EVAPORATION, 0
    elif mach == 1.0:
        regime, free = Regime.SONIC_EVAPORATION, None
    elif mach > 0.0:
        regime, free = Regime.SUBSONIC_EVAPORATION, 1
    elif mach == 0.0:
        regime, free = Regime.REST, None
    elif mach > -1.0:
        regime, free = Regime.SUBSONIC_CONDENSATION, 2
    elif mach == -1.0:
        regime, free = Regime.SONIC_CONDENSATION, None
    else:
        regime, free = Regime.SUPERSONIC_CONDENSATION, 3
    return RegimeReport(regime, k_plus, l_zero, free)
