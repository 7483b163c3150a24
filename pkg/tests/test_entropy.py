import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import polyevap.entropy as ent
from polyevap.entropy import (
    Form,
    entropy_bound,
    lambda_direct,
    lambda_recast,
    lambda_recast_first,
    theta_tilde,
    upsilon,
)
from polyevap.errors import ContractViolation, CrossCheckError, InfeasibleMomentsError
from polyevap.gas import FarFieldState, GasParams, incoming_half_moments
from polyevap.kernels import log_half_gauss_moment, shape_function, theta

from oracles import DELTAS, random_feasible_states

G0 = GasParams(0)
REST = FarFieldState(1.0, 1.0, 0.0)


def agree(a, b):
    return abs(a - b) <= max(1e-10, 1e-8 * abs(a))


def test_upsilon_at_rest():
    assert upsilon(REST, G0) == pytest.approx(8 / math.pi, rel=1e-15)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 7), st.floats(0.1, 3), st.floats(-2.5, 1.75), st.sampled_from(DELTAS))
def test_upsilon_matches_moments(p, T, M, d):
    gas = GasParams(d)
    s = FarFieldState(p, T, M)
    n = incoming_half_moments(s, gas)
    if abs(n.n2) > 1e-3:
        assert upsilon(s, gas) == pytest.approx(n.n1 * n.n5 / n.n2**2, rel=1e-12)


def test_upsilon_negative_when_n1_negative():
    s = FarFieldState(1.0, 0.1, 0.12)
    assert incoming_half_moments(s, G0).n1 < 0 and upsilon(s, G0) < 0
    with pytest.raises(InfeasibleMomentsError) as e:
        lambda_direct(s, G0)
    assert e.value.moment == "n1"


@pytest.mark.parametrize("delta", DELTAS)
@pytest.mark.parametrize("form", list(Form))
def test_zero_at_rest(delta, form):
    assert abs(entropy_bound(REST, GasParams(delta), form).value) <= 1e-9


def test_positive_near_curve_and_deep_condensation():
    assert lambda_direct(FarFieldState(0.27, 0.70, 0.8), G0).value > 0
    a = lambda_direct(FarFieldState(5, 0.5, -1.5), G0).value
    b = entropy_bound(FarFieldState(5, 0.5, -1.5), G0, "checked").value
    assert a == b and agree(a, lambda_recast(FarFieldState(5, 0.5, -1.5), G0).value)


def test_inadmissible_example_is_infeasible():
    # Cauchy-Schwarz gives N2^2 <= N1 N5 for any distribution, so Upsilon < 1
    # rules the state out before Lambda can be formed
    with pytest.raises(InfeasibleMomentsError) as e:
        lambda_direct(FarFieldState(1, 1, 0.1), G0)
    assert e.value.moment == "upsilon"


def test_infeasible_names_moment():
    with pytest.raises(InfeasibleMomentsError) as e:
        entropy_bound(FarFieldState(0.2, 1, 0), G0)
    assert e.value.moment == "n2"


def test_unknown_form():
    with pytest.raises(ContractViolation):
        entropy_bound(REST, G0, "sideways")


@pytest.mark.parametrize("delta", [0.5, 2.0, 3.0, 5.0])
def test_forms_agree_on_random_states(delta):
    gas = GasParams(delta)
    for s in random_feasible_states(123, 400, gas):
        d = lambda_direct(s, gas)
        r = lambda_recast(s, gas)
        assert agree(d.value, r.value)
        assert r.value == pytest.approx(r.boundary_term + r.far_field_term - r.min_flux_term, abs=1e-12)
        if d.s < 2.5:
            assert agree(d.value, lambda_recast_first(s, gas))


def test_breakdowns_differ_but_values_agree():
    s = FarFieldState(0.27, 0.7, 0.8)
    d, r = lambda_direct(s, G0), lambda_recast(s, G0)
    assert d.form is Form.DIRECT and r.form is Form.RECAST
    assert d.far_field_term != r.far_field_term and agree(d.value, r.value)


def test_checked_raises_on_disagreement(monkeypatch):
    real = ent.lambda_recast

    def skewed(state, gas, seed=None):
        b = real(state, gas, seed)
        return ent.LambdaBreakdown(b.value + 1e-6, b.boundary_term, 0.0, b.min_flux_term, b.upsilon, b.s, b.form)

    monkeypatch.setattr(ent, "lambda_recast", skewed)
    with pytest.raises(CrossCheckError):
        entropy_bound(FarFieldState(0.27, 0.7, 0.8), G0)


def test_theta_tilde_identity():
    for d in (0.0, 3.0):
        gas = GasParams(d)
        for s in np.linspace(-20, 4, 97):
            ups = shape_function(s, gas)
            tt = theta_tilde(s, ups, d) + 0.5 + s * s
            assert tt == pytest.approx(theta(s), rel=1e-10, abs=1e-10)
    assert theta_tilde(0.0, shape_function(0.0, G0), 0.0) == pytest.approx(0.5, abs=1e-15)


def test_i0_from_shape_invariant():
    for d in (0.0, 2.0, 5.0):
        gas = GasParams(d)
        for s in np.linspace(-20, 2, 89):
            ups = shape_function(s, gas)
            r = math.sqrt(s * s + 2 * (4 + d) * ups)
            num = r + (1 - 2 * ups) * s
            den = (1 + 2 * s * s) * ups - s * s - s * r
            log_i0 = -s * s + math.log(0.5 * num / den)
            assert log_i0 - log_half_gauss_moment(0, s) == pytest.approx(0.0, abs=1e-9)


def test_delta_zero_is_continuous_limit():
    small = GasParams(1e-6)
    for s in random_feasible_states(5, 200, G0):
        try:
            v = lambda_direct(s, small).value
        except InfeasibleMomentsError:
            continue
        assert abs(v - lambda_direct(s, G0).value) <= 1e-4


def test_diverges_at_pressure_wall():
    floor = 1 / (2 * (1 + G0.gamma * 0.25))
    vals = [lambda_direct(FarFieldState(floor * (1 + e), 0.9, -0.5), G0).value for e in 10.0 ** -np.arange(2, 15)]
    assert np.all(np.diff(vals) < 0) and vals[-1] < -40
    # deep in the tail the two forms still match
    st_ = FarFieldState(floor * (1 + 1e-12), 0.9, -0.5)
    assert agree(lambda_direct(st_, G0).value, lambda_recast(st_, G0).value)
