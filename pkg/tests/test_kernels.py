import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polyevap.errors import ContractViolation
from polyevap.gas import GasParams
from polyevap.kernels import (
    ScaledMoment,
    half_gauss_moment,
    log_half_gauss_moment,
    moment_ratio,
    shape_function,
    theta,
)

from oracles import mp_log_half_gauss

s_values = st.floats(min_value=-30.0, max_value=30.0, allow_nan=False)


def test_values_at_zero():
    assert half_gauss_moment(0, 0.0).value == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-15)
    assert half_gauss_moment(1, 0.0).value == pytest.approx(0.5, rel=1e-15)
    assert moment_ratio(1, 0, 0.0) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-15)


@pytest.mark.parametrize("n,s", [(3, -8.0), (5, -1.5), (5, -1.49), (0, 12.0), (4, -25.0)])
def test_against_quadrature(n, s):
    assert log_half_gauss_moment(n, s) - mp_log_half_gauss(n, s) == pytest.approx(0.0, abs=1e-10)


def test_ratio_tail_against_quadrature():
    ref = math.exp(mp_log_half_gauss(2, -10.0) - mp_log_half_gauss(1, -10.0))
    assert moment_ratio(2, 1, -10.0) == pytest.approx(ref, rel=1e-10)


def test_ratio_grows_like_s():
    assert moment_ratio(1, 0, 30.0) == pytest.approx(30.0, rel=1e-12)


def test_deep_tail_does_not_underflow():
    m = half_gauss_moment(2, -30.0)
    assert m.value == 0.0
    assert m.log() == pytest.approx(-900.0 - math.log(4 * 27000), abs=1e-2)


def test_scaled_moment_roundtrip():
    m = ScaledMoment.from_log(-1234.5678)
    assert 1.0 <= m.mantissa < math.e
    assert m.log() == pytest.approx(-1234.5678, abs=1e-12)


def test_theta_anchors():
    assert theta(0.0) == pytest.approx(1.0, abs=1e-15)
    assert theta(30.0) - 0.5 <= 1e-6
    assert theta(-10.0) == pytest.approx(100.0, rel=0.02)


def test_shape_function_anchors():
    assert shape_function(0.0, GasParams(0)) == pytest.approx(8.0 / math.pi, rel=1e-14)
    assert shape_function(30.0, GasParams(0)) == pytest.approx(1.0 + 3.0 / 1800.0, rel=0.01)
    assert shape_function(-30.0, GasParams(2)) == pytest.approx(1800.0, rel=0.02)


def test_tail_bounds_on_i0():
    for s in np.linspace(-30.0, -3.0, 55):
        s2 = s * s
        log_base = -s2 - math.log(2.0 * abs(s))
        lo = (1 + 2.5 / s2) / (1 + 3 / s2 + 0.75 / s2**2)
        hi = (1 + 4.5 / s2 + 2 / s2**2) / (1 + 5 / s2 + 3.75 / s2**2)
        # compare on the log scale so s = -30 stays representable
        li = log_half_gauss_moment(0, s)
        tol = 1e-14 * abs(li)
        assert math.log(lo) + log_base <= li + tol
        assert li <= math.log(hi) + log_base + tol


@settings(max_examples=300, deadline=None)
@given(s_values, st.integers(2, 5))
def test_recursion(s, n):
    # I_n = s I_{n-1} + (n-1)/2 I_{n-2}, divided through by I_{n-2}
    lhs = moment_ratio(n, n - 2, s)
    rhs = s * moment_ratio(n - 1, n - 2, s) + 0.5 * (n - 1)
    assert abs(lhs - rhs) <= 1e-12 * lhs


@settings(max_examples=200, deadline=None)
@given(s_values, st.integers(0, 5))
def test_positive(s, n):
    assert half_gauss_moment(n, s).mantissa > 0.0


@pytest.mark.parametrize("delta", [0.0, 0.5, 2.0, 5.0])
def test_shape_function_decreasing_above_one(delta):
    gas = GasParams(delta)
    vals = np.array([shape_function(s, gas) for s in np.linspace(-40, 40, 2001)])
    assert np.all(np.diff(vals) < 0)
    assert np.all(vals > 1.0)
    assert vals[-1] < 1.01 and vals[0] > 1000


@pytest.mark.parametrize("bad", [(6, 0.0), (-1, 0.0), (0, math.nan), (0, math.inf)])
def test_contract(bad):
    with pytest.raises(ContractViolation):
        half_gauss_moment(*bad)
