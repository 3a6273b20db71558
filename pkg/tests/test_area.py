import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from echomem import odecheck
from echomem.area import (
    AreaProtocolConfig,
    BifurcationError,
    Geometry,
    control_pulse_areas,
    crib_area_map,
    crib_area_profile,
    crib_backward_area,
    crib_backward_output_area,
    crib_forward_area,
    efficiency_measures,
    mccall_hahn_area,
    rose_closed_form,
    rose_formal_solution,
    rose_gain_map,
    rose_sources,
)

THETAS = np.linspace(0.05, 0.95, 7) * math.pi
DEPTHS = np.linspace(0.2, 8.0, 9)


def test_mccall_hahn_matches_rk4():
    ref, _ = odecheck.ode_mccall_hahn(THETAS, DEPTHS)
    got = np.array([[mccall_hahn_area(d, t, 1.0) for d in DEPTHS] for t in THETAS])
    assert np.max(np.abs(got - ref)) < 1e-9


def test_mccall_hahn_refuses_pi():
    with pytest.raises(BifurcationError):
        mccall_hahn_area(1.0, math.pi, 1.0)


def test_forward_crib_matches_rk4():
    ref, _ = odecheck.ode_crib_forward(THETAS, DEPTHS, gamma_e=0.8)
    got = np.array([[crib_forward_area(d, AreaProtocolConfig(t, gamma_e=0.8)) for d in DEPTHS] for t in THETAS])
    assert np.max(np.abs(got - ref)) < 1e-9


def test_backward_crib_matches_rk4_inside_medium():
    zeta = np.array([0.0, 0.25, 0.5, 1.0])
    ref, _ = odecheck.ode_crib_backward(THETAS, DEPTHS, zeta, gamma_e=0.7)
    for i, t in enumerate(THETAS):
        for j, d in enumerate(DEPTHS):
            cfg = AreaProtocolConfig(t, gamma_e=0.7, alpha0=d, length=1.0)
            assert np.max(np.abs(crib_backward_area(zeta, cfg) - ref[:, i, j])) < 1e-9


def test_backward_output_is_entrance_value():
    cfg = AreaProtocolConfig(1.2, alpha0=3.0, length=2.0)
    assert crib_backward_output_area(cfg) == pytest.approx(crib_backward_area(0.0, cfg), abs=1e-15)
    assert crib_backward_area(2.0, cfg) == 0.0


def test_control_areas_match_rk4():
    c = np.linspace(0.1, 0.95, 6) * math.pi
    r1, r2, _ = odecheck.ode_control_areas(c, c[::-1], DEPTHS)
    for i in range(c.size):
        t1, t2 = control_pulse_areas(DEPTHS, c[i], c[::-1][i], 1.0)
        assert np.max(np.abs(t1 - r1[i])) < 1e-9
        assert np.max(np.abs(t2 - r2[i])) < 1e-9


def test_control_areas_refuse_pi():
    with pytest.raises(BifurcationError):
        control_pulse_areas(1.0, math.pi, 0.5, 1.0)


def test_rose_matches_rk4():
    c = np.linspace(0.3, 1.0, 8) * math.pi
    ref, _ = odecheck.ode_rose(c, DEPTHS, 0.3, gamma_e=0.9)
    got = np.array([rose_closed_form(DEPTHS, AreaProtocolConfig(0.3, tc, tc, 0.9, geometry="forward")) for tc in c])
    assert np.max(np.abs(got - ref)) < 1e-9


@pytest.mark.parametrize("tc", [0.6 * math.pi, 0.8 * math.pi, math.pi])
def test_rose_formal_solution_agrees(tc):
    cfg = AreaProtocolConfig(0.2, tc, tc, 1.0, geometry="forward")
    for z in (0.5, 2.0, 4.0):
        assert rose_formal_solution(z, cfg) == pytest.approx(rose_closed_form(z, cfg), abs=1e-9)


def test_rose_double_count_differs():
    cfg = AreaProtocolConfig(0.2, 0.8 * math.pi, 0.8 * math.pi, 1.0, geometry="forward")
    assert rose_formal_solution(2.0, cfg, double_count=True) < 0.5 * rose_formal_solution(2.0, cfg)


def test_rose_pi_column_closed_form():
    x = np.linspace(0, 10, 101)
    g = rose_gain_map([math.pi], x)[0]
    assert np.max(np.abs(g - x**2 * np.exp(-x))) < 1e-14
    assert g[20] == pytest.approx(4 * math.exp(-2), abs=1e-14)


def test_rose_sources_pi_controls():
    src = rose_sources(np.array([0.0, 1.0]), AreaProtocolConfig(0.1, math.pi, math.pi, 1.0))
    assert np.allclose(src.w_e, -1.0)
    assert np.allclose(src.p_e, 0.1 * np.exp(-np.array([0.0, 0.5])))


def test_rose_zero_second_control_gives_no_echo():
    cfg = AreaProtocolConfig(0.1, 0.5 * math.pi, 0.0, geometry="forward")
    assert np.all(rose_closed_form(np.array([1.0, 3.0]), cfg) == 0)
    with pytest.raises(ValueError):
        rose_closed_form(1.0, AreaProtocolConfig(0.1, 0.0, 0.5))


def test_small_depth_linear_limit():
    for ts in (0.2, 1.0, 2.5):
        cfg = AreaProtocolConfig(ts, gamma_e=0.9, alpha0=0.01)
        lin = 0.9 * math.sin(ts) * 0.01
        assert crib_backward_output_area(cfg) == pytest.approx(lin, rel=0.01)


def test_deep_backward_restores_area():
    for ts in np.linspace(0.05, 0.9, 18) * math.pi:
        assert crib_backward_output_area(AreaProtocolConfig(ts, alpha0=20.0)) == pytest.approx(ts, abs=1e-6)


@given(st.floats(0.01, 3.1), st.floats(0.0, 15.0), st.floats(0.0, 1.0))
def test_echo_area_bounded_by_gamma_scaling(ts, d, g):
    full = crib_backward_output_area(AreaProtocolConfig(ts, gamma_e=1.0, alpha0=d))
    part = crib_backward_output_area(AreaProtocolConfig(ts, gamma_e=g, alpha0=d))
    assert 0.0 <= part <= full + 1e-15


@given(st.floats(0.01, 3.1), st.floats(0.0, 15.0))
def test_backward_area_monotone_in_depth(ts, d):
    a = crib_backward_output_area(AreaProtocolConfig(ts, alpha0=d))
    b = crib_backward_output_area(AreaProtocolConfig(ts, alpha0=d + 0.5))
    assert b >= a - 1e-15


def test_efficiency_measures():
    et, tt = efficiency_measures(1.0, 2.0)
    assert et == pytest.approx(0.25)
    assert tt == pytest.approx((math.tan(0.5) / math.tan(1.0)) ** 2)
    with pytest.raises(ValueError):
        efficiency_measures(1.0, 0.0)


def test_area_map_shapes_and_geometry():
    ts = np.array([0.2, 0.5]) * math.pi
    d = np.array([0.5, 2.0, 6.0])
    bwd = crib_area_map(ts, d, Geometry.BACKWARD)
    fwd = crib_area_map(ts, d, "forward", measure="tan")
    assert bwd.shape == fwd.shape == (2, 3)
    assert np.all(np.diff(bwd, axis=1) > 0)
    with pytest.raises(ValueError):
        crib_area_map(ts, d, measure="energy")


def test_profile_dispatch():
    z = np.linspace(0, 1, 5)
    cfg = AreaProtocolConfig(0.5, alpha0=2.0, geometry="forward")
    assert np.array_equal(crib_area_profile(z, cfg).theta, crib_forward_area(z, cfg))


def test_config_validation():
    with pytest.raises(ValueError):
        AreaProtocolConfig(math.pi)
    with pytest.raises(ValueError):
        AreaProtocolConfig(0.5, theta_c1=4.0)
    with pytest.raises(ValueError):
        AreaProtocolConfig(0.5, gamma_e=1.5)
    with pytest.raises(ValueError):
        AreaProtocolConfig(0.5, geometry="sideways")
