import math

import numpy as np
import pytest

from polyevap.admissibility import check_all
from polyevap.entropy import lambda_direct
from polyevap.errors import ContractViolation, NoFeasiblePointError, SearchBoundError
from polyevap.explorer import (
    CONDENSATION_P_CAP,
    admissible_region_mach_limit,
    boundary_cell,
    boundary_surface,
    condensation_surface,
    default_t_grid,
    evaporation_curve,
    max_positive_mach,
    maximize_lambda_p,
    maximize_lambda_pt,
    safe_lambda,
)
from polyevap.gas import FarFieldState, GasParams

G0 = GasParams(0)
G5 = GasParams(5)


@pytest.fixture(scope="module")
def curve_point_05():
    return maximize_lambda_pt(0.5, G0)


def test_small_mach_optimum_near_rest():
    pt = maximize_lambda_pt(0.01, G0)
    assert abs(pt.p_sharp - 1) < 0.05 and abs(pt.t_sharp - 1) < 0.05
    assert pt.lambda_max >= 0


def test_evaporation_optimum_is_local_max(curve_point_05):
    pt = curve_point_05
    assert check_all(FarFieldState(pt.p_sharp, pt.t_sharp, 0.5), G0).admissible
    h = 1e-5
    for dp, dt in [(h, 0), (-h, 0), (0, h), (0, -h), (h, h), (-h, -h), (h, -h), (-h, h)]:
        assert safe_lambda(pt.p_sharp + dp, pt.t_sharp + dt, 0.5, G0) <= pt.lambda_max + 1e-14
    assert not pt.boundary


def test_curve_ordered_in_delta():
    a, b = maximize_lambda_pt(0.4, G0), maximize_lambda_pt(0.4, G5)
    assert b.p_sharp > a.p_sharp and b.t_sharp > a.t_sharp


def test_curve_point_at_rest():
    pt = maximize_lambda_pt(0.0, G0)
    assert (pt.p_sharp, pt.t_sharp, pt.lambda_max) == (1.0, 1.0, 0.0)


def test_curve_excludes_negative_tail():
    c = evaporation_curve(G0, [0.2, 1.0, 1.7, 1.9])
    assert [p.mach for p in c.points] == [0.2, 1.0]
    assert c.excluded == [1.7, 1.9]
    assert all(p.lambda_max >= 0 for p in c)


def test_max_positive_mach():
    m0 = max_positive_mach(G0)
    assert m0 == pytest.approx(1.6, abs=0.05)
    assert maximize_lambda_pt(m0 - 0.01, G0).lambda_max >= 0
    assert maximize_lambda_pt(m0 + 0.01, G0).lambda_max < 0
    with pytest.raises(SearchBoundError):
        max_positive_mach(G0, upper=0.5)


def test_admissible_region_limit():
    # (c) meets the overall bound exactly at 1/32 when M = 3
    assert admissible_region_mach_limit(G0) == pytest.approx(3.0, abs=1e-9)


def test_condensation_interior_optimum():
    smp = maximize_lambda_p(1.0, -0.5, G0)
    assert not smp.boundary
    assert smp.p_star == pytest.approx(3.0088, abs=1e-3)
    h = 1e-6
    grad = (safe_lambda(smp.p_star + h, 1.0, -0.5, G0) - safe_lambda(smp.p_star - h, 1.0, -0.5, G0)) / (2 * h)
    assert abs(grad) <= 1e-4


@pytest.mark.parametrize("T", [0.25, 0.5, 1.0, 2.0])
def test_condensation_small_mach_near_rest(T):
    assert 0.95 <= maximize_lambda_p(T, -0.01, G0).p_star <= 1.05


def test_condensation_hits_cap():
    smp = maximize_lambda_p(0.25, -1.0, G0)
    assert smp.boundary and smp.p_star == pytest.approx(CONDENSATION_P_CAP, rel=1e-8)


def test_condensation_pstar_grows_with_speed():
    ms = np.round(np.arange(-0.95, -0.04, 0.05), 10)[::-1]
    surf = condensation_surface(G0, [0.25], ms)
    ps = [s.p_star for s in surf]
    assert len(ps) == len(ms) and not surf.missing
    assert np.all(np.diff(ps) >= -1e-9)


def test_surface_row_major():
    surf = condensation_surface(G0, [0.5, 1.0], [-0.3, -0.2])
    assert [(s.temperature, s.mach) for s in surf] == [(0.5, -0.3), (0.5, -0.2), (1.0, -0.3), (1.0, -0.2)]


def _check_interval(b, T, M, gas):
    for end in (b.p_lower, b.p_upper):
        if 0.02 < end < CONDENSATION_P_CAP:
            assert abs(safe_lambda(end, T, M, gas)) <= 1e-10
    mid = math.sqrt(b.p_lower * b.p_upper)
    assert lambda_direct(FarFieldState(mid, T, M), gas).value > 0
    assert check_all(FarFieldState(mid, T, M), gas).admissible


@pytest.mark.parametrize("T", [0.25, 0.5, 1.0, 2.0])
def test_boundary_intervals_tighten_at_rest(T):
    wide, narrow = boundary_cell(T, -0.01, G0), boundary_cell(T, -0.001, G0)
    assert len(wide) == len(narrow) == 1
    for b in wide + narrow:
        _check_interval(b, T, b.mach, G0)
    w, n = wide[0], narrow[0]
    assert n.p_upper - n.p_lower < w.p_upper - w.p_lower
    assert abs(n.p_lower - 1) < abs(w.p_lower - 1) + 1e-12
    # the zero set changes sign across each finite endpoint
    for end, side in ((w.p_lower, -1), (w.p_upper, 1)):
        assert safe_lambda(end + side * 1e-6, T, -0.01, G0) < 0 < safe_lambda(end - side * 1e-6, T, -0.01, G0)


def test_evaporation_slice_narrow_in_p():
    ts = np.round(np.arange(0.3, 1.5, 0.02), 10)
    rows = boundary_surface(G0, ts, [0.5])
    assert rows
    t_extent = max(r.temperature for r in rows) - min(r.temperature for r in rows)
    width = max(r.p_upper - r.p_lower for r in rows)
    assert width < 0.25 * t_extent
    for r in rows:
        _check_interval(r, r.temperature, 0.5, G0)


def test_rest_pinch():
    rows = boundary_surface(G0, default_t_grid(), [0.0])
    assert [(r.p_lower, r.p_upper, r.temperature) for r in rows] == [(1.0, 1.0, 1.0)]


def test_deterministic():
    a = condensation_surface(G0, [0.7], [-0.6, -0.3])
    b = condensation_surface(G0, [0.7], [-0.6, -0.3])
    assert a.samples == b.samples
    assert boundary_cell(0.8, -0.4, G0) == boundary_cell(0.8, -0.4, G0)


def test_contracts():
    with pytest.raises(ContractViolation):
        maximize_lambda_pt(-0.1, G0)
    with pytest.raises(ContractViolation):
        maximize_lambda_p(1.0, 0.1, G0)
    with pytest.raises(ContractViolation):
        condensation_surface(G0, [1.0], [0.2])
    with pytest.raises(NoFeasiblePointError):
        maximize_lambda_pt(0.5, G0, search_box=((0.01, 0.02), (0.1, 0.2)))
