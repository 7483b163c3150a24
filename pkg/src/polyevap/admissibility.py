"""Necessary conditions on the far-field state, each with a signed margin.

A margin is positive strictly inside the admissible set, zero on its edge
and negative outside; ``satisfied`` is ``margin >= 0``. The evaporation
flux and energy conditions use the impinging half moments N1- and N5- as
their margins, since the inequalities are those positivity statements
rearranged.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ContractViolation
from .gas import FarFieldState, GasParams, RegimeReport, classify_regime, incoming_half_moments

STATIONARY_TOL = 1e-12


@dataclass(frozen=True)
class ConditionResult:
    satisfied: bool
    margin: float

    @classmethod
    def from_margin(cls, margin: float) -> "ConditionResult":
        return cls(bool(margin >= 0.0), float(margin))


def overall_bound(mach: float, gas: GasParams) -> float:
    return 1.0 / (2.0 * (1.0 + gas.gamma * mach * mach))


def evaporation_pressure_bound(mach: float, gas: GasParams) -> float:
    d = gas.delta
    return (1.0 + mach * mach / (3.0 + d)) ** (-(5.0 + d) / 2.0)


def condensation_bound(T: float, mach: float, gas: GasParams) -> float:
    """Lower bound on p for condensation; its maximum over T is
    :func:`evaporation_pressure_bound`, reached at T = 1/(1 + M^2/(3+delta))."""
    k = 0.5 * (5.0 + gas.delta)
    x = (1.0 + mach * mach / (3.0 + gas.delta)) * T
    return T**k * math.exp(k * (1.0 - x))


def check_overall(state: FarFieldState, gas: GasParams) -> ConditionResult:
    """p >= 1/(2(1 + gamma M^2)), i.e. N2- >= 0."""
    return ConditionResult.from_margin(state.p - overall_bound(state.mach, gas))


def check_evaporation(state: FarFieldState, gas: GasParams) -> tuple[ConditionResult, ConditionResult, ConditionResult]:
    """(flux, energy, pressure) conditions for M > 0.

    flux: N1- >= 0; energy: N5- >= 0; pressure: p <= (1 + M^2/(3+delta))^(-(5+delta)/2).
    """
    if not state.mach > 0.0:
        raise ContractViolation(f"evaporation conditions need mach > 0, got {state.mach!r}")
    n = incoming_half_moments(state, gas)
    pressure = evaporation_pressure_bound(state.mach, gas) - state.p
    return (
        ConditionResult.from_margin(n.n1),
        ConditionResult.from_margin(n.n5),
        ConditionResult.from_margin(pressure),
    )


def check_condensation(state: FarFieldState, gas: GasParams) -> ConditionResult:
    if not state.mach < 0.0:
        raise ContractViolation(f"condensation condition needs mach < 0, got {state.mach!r}")
    return ConditionResult.from_margin(state.p - condensation_bound(state.T, state.mach, gas))


def check_stationary(state: FarFieldState) -> ConditionResult:
    """At rest only p = T = 1 is possible (to within 1e-12)."""
    if state.mach != 0.0:
        raise ContractViolation(f"stationary condition needs mach == 0, got {state.mach!r}")
    dev = max(abs(state.p - 1.0), abs(state.T - 1.0))
    return ConditionResult.from_margin(STATIONARY_TOL - dev)


@dataclass(frozen=True)
class AdmissibilityReport:
    overall: ConditionResult
    evap_flux: Optional[ConditionResult]
    evap_energy: Optional[ConditionResult]
    evap_pressure: Optional[ConditionResult]
    condensation: Optional[ConditionResult]
    regime: RegimeReport
    admissible: bool
    stationary: Optional[ConditionResult] = None

    def applicable(self) -> dict[str, ConditionResult]:
        names = ("overall", "evap_flux", "evap_energy", "evap_pressure", "condensation", "stationary")
        return {k: getattr(self, k) for k in names if getattr(self, k) is not None}


def check_all(state: FarFieldState, gas: GasParams) -> AdmissibilityReport:
    """Every condition that applies to the sign of M; inapplicable ones are None."""
    overall = check_overall(state, gas)
    flux = energy = pressure = cond = stat = None
    if state.mach > 0.0:
        flux, energy, pressure = check_evaporation(state, gas)
    elif state.mach < 0.0:
        cond = check_condensation(state, gas)
    else:
        stat = check_stationary(state)
    parts = [c for c in (overall, flux, energy, pressure, cond, stat) if c is not None]
    return AdmissibilityReport(
        overall=overall,
        evap_flux=flux,
        evap_energy=energy,
        evap_pressure=pressure,
        condensation=cond,
        regime=classify_regime(state.mach),
        admissible=all(c.satisfied for c in parts),
        stationary=stat,
    )
