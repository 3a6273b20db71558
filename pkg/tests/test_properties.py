"""Property-based checks of the model invariants."""

import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from echomem import afc, area, linear, pulses
from echomem.lineshape import InhomogeneousLine, LineShape, Medium, chi, resonant_absorption

GAUSS = InhomogeneousLine(LineShape.GAUSSIAN)
LORENTZ = InhomogeneousLine()
LINES = st.sampled_from([LORENTZ, GAUSS])
omegas = st.floats(-5.0, 5.0, allow_nan=False)
depths = st.floats(0.0, 20.0)
gammas = st.floats(0.0, 1.0)
areas = st.floats(0.01, math.pi - 0.01)


# ---------------------------------------------------------------- susceptibility

@given(st.lists(omegas, min_size=1, max_size=20))
def test_lorentzian_dispersion_tracks_absorption(ws):
    c = chi(LORENTZ, np.array(ws))
    assert np.allclose(c.imag, np.array(ws) * c.real, rtol=1e-15, atol=1e-16)


@given(LINES, omegas)
def test_resonant_absorption_even_nonnegative_peaked(line, w):
    m = Medium(1.3, 1.0)
    a, b, top = (resonant_absorption(m, line, v) for v in (w, -w, 0.0))
    assert a == b and a >= 0 and a <= top


@given(st.floats(-5.0, 5.0))
def test_lorentzian_weight_through_quadrature(w):
    line = InhomogeneousLine(LineShape.LORENTZIAN, t2=20.0)
    q = chi(line, w, method="quadrature", tol=1e-12)
    c = chi(line, w, method="closed")
    assert abs(q - c) / abs(c) < 1e-8


# ---------------------------------------------------------------- linear response

@given(omegas, depths, gammas, LINES)
def test_backward_crib_has_no_phase(w, d, g, line):
    h = linear.crib_backward_transfer(w, d, g, line)
    assert np.angle(h + 0j) == 0.0


# the relative gap is (ω α_R Z)²/24, so 1e-6 at |ω| < 1e-3 holds up to depth ≈ 4.9
@given(st.floats(-1e-3, 1e-3), st.floats(0.1, 4.8))
def test_forward_approaches_narrowband(w, d):
    f = linear.crib_forward_transfer(w, d)
    n = linear.crib_narrowband_transfer(w, d)
    assert abs(f - n) <= 1e-6 * abs(n)


@given(depths, gammas, st.booleans())
def test_gem_geometries_agree(k, g, _):
    assert linear.gem_transfer(k, g, "forward") == linear.gem_transfer(k, g, "backward")


def _spectral_efficiency(p, h, reflect):
    src = pulses.time_reverse(p) if reflect else p
    w, s = src.spectrum()
    return float(np.sum(np.abs(h) ** 2 * np.abs(s) ** 2) / np.sum(np.abs(s) ** 2))


PROTOCOL = st.sampled_from(["crib-bwd", "crib-fwd", "afc-fwd", "afc-bwd"])


def _transfer(name, omega, depth):
    if name == "crib-bwd":
        return linear.crib_backward_transfer(omega, depth), True
    if name == "crib-fwd":
        return linear.crib_forward_transfer(omega, depth), True
    if name == "afc-fwd":
        return afc.afc_forward_transfer(omega, depth), False
    return afc.afc_backward_transfer(omega, depth), False


@given(PROTOCOL, st.floats(0.1, 6.0), st.floats(0.3, 1.5))
def test_parseval_consistency(name, d, width):
    p = pulses.gaussian_pulse(1.0 / width, n=4097, span=400.0 / width)
    h, reflect = _transfer(name, p.omega, d)
    echo = linear.apply_transfer(p, linear.TransferFunction(p.omega, h, reflect), strict=True)
    assert pulses.energy_efficiency(p, echo) == pytest.approx(_spectral_efficiency(p, h, reflect), abs=1e-9)


@given(PROTOCOL, st.floats(0.1, 6.0), st.floats(-math.pi, math.pi))
def test_efficiency_phase_invariant(name, d, phase):
    p = pulses.gaussian_pulse(1.0, n=2049, span=300.0)
    q = p.with_envelope(p.envelope * np.exp(1j * phase))
    h, reflect = _transfer(name, p.omega, d)
    tf = linear.TransferFunction(p.omega, h, reflect)
    e1 = pulses.energy_efficiency(p, linear.apply_transfer(p, tf))
    e2 = pulses.energy_efficiency(q, linear.apply_transfer(q, tf))
    assert e1 == pytest.approx(e2, abs=1e-12)


@given(st.floats(-20.0, 20.0), st.floats(-math.pi, math.pi))
def test_pulse_metrics_invariant_under_shift_and_phase(t0, phase):
    p = pulses.gaussian_pulse(2.0, n=4097, span=200.0)
    q = pulses.gaussian_pulse(2.0, amplitude=np.exp(1j * phase), n=4097, span=200.0, t0=t0)
    assert pulses.spectral_width_hwem(q) == pytest.approx(pulses.spectral_width_hwem(p), rel=1e-9)
    assert pulses.rms_duration(q) == pytest.approx(pulses.rms_duration(p), rel=1e-9)
    assert q.energy == pytest.approx(p.energy, rel=1e-12)


# ---------------------------------------------------------------- comb

@given(st.floats(1.01, 100.0), st.floats(1.01, 100.0))
def test_comb_dephasing_range_and_monotone(f1, f2):
    g1, g2 = afc.afc_dephasing(f1), afc.afc_dephasing(f2)
    assert 0 < g1 <= 1 and 0 < g2 <= 1
    if f1 < f2:
        assert g1 <= g2


@given(st.floats(1.01, 50.0), st.floats(0.1, 10.0))
def test_comb_finesse_consistency(f, spacing):
    c = afc.AfcComb(finesse=f, delta_afc=spacing)
    assert abs(c.delta_afc / c.upsilon - f) <= 1e-12 * f


@given(st.floats(0.0, 10.0), st.floats(1.01, 50.0))
def test_forward_comb_on_resonance(d, f):
    g = afc.afc_dephasing(f)
    assert abs(afc.afc_forward_transfer(0.0, d, g)) ** 2 == pytest.approx(d * d * math.exp(-d) * g * g,
                                                                           rel=1e-12, abs=1e-300)


@given(st.floats(0.0, 30.0), st.floats(0.0, 5.0))
def test_backward_comb_monotone_in_length_on_resonance(d, extra):
    a = abs(afc.afc_backward_transfer(0.0, d))
    b = abs(afc.afc_backward_transfer(0.0, d + extra))
    assert b >= a - 1e-15


def test_backward_comb_oscillates_in_length_off_resonance():
    # |1 - e^{-a(1 + iω)}| ripples with the phase aω, so monotonicity in L is an on-resonance property
    mags = np.array([abs(afc.afc_backward_transfer(1.0, d)) for d in np.linspace(0.0, 10.0, 1001)])
    assert np.any(np.diff(mags) < 0)


@given(st.floats(0.6, 3.0), st.floats(-0.99, 0.99))
def test_comb_absorption_negative_and_d_finite(delta0, frac):
    c = afc.AfcComb(10.0, 80.0, delta0, host=GAUSS)
    w = frac * delta0 / 2
    x = afc.chi_total(w, c)
    assert x.imag < 0
    assert np.isfinite(afc.afc_dispersion_transfer(w, c, np.array([x])))


@given(st.floats(0.8, 3.0), st.floats(0.0, 0.39))
def test_wings_mirror(delta0, w):
    c = afc.AfcComb(10.0, 80.0, delta0, host=GAUSS)
    l1, r1 = afc.chi_wings(np.array([w]), c)
    l2, r2 = afc.chi_wings(np.array([-w]), c)
    assert l1[0] == pytest.approx(-r2[0], abs=1e-12)
    assert r1[0] == pytest.approx(-l2[0], abs=1e-12)


@given(st.floats(10.5, 40.0))
def test_wings_vanish_for_wide_window(delta0):
    c = afc.AfcComb(10.0, 80.0, delta0, host=GAUSS)
    l, r = afc.chi_wings(np.linspace(-0.25, 0.25, 11), c)
    assert np.max(np.abs(l + r)) < 1e-6


# ---------------------------------------------------------------- areas

@given(areas, st.floats(0.0, 20.0), st.floats(0.0, 1.0))
def test_areas_stay_in_principal_range(ts, d, g):
    cfg = area.AreaProtocolConfig(ts, gamma_e=g, alpha0=d)
    for th in (area.crib_backward_output_area(cfg), area.crib_forward_area(1.0, cfg)):
        assert -math.pi < th <= math.pi


@given(areas, st.floats(0.1, 10.0))
def test_profiles_are_continuous(ts, d):
    z = np.linspace(0, 1, 401)
    for geom in ("forward", "backward"):
        prof = area.crib_area_profile(z, area.AreaProtocolConfig(ts, alpha0=d, geometry=geom))
        assert np.max(np.abs(np.diff(prof.theta))) < math.pi / 2


@given(st.floats(0.0, 15.0), st.floats(0.0, 1.0))
def test_rose_pi_controls_bounded(x, g):
    eta = area.rose_gain_map([math.pi], [x], gamma_e=g)[0, 0]
    assert eta <= 4 * math.exp(-2) * g * g + 1e-15


@given(areas, st.floats(0.0, 10.0), st.floats(0.01, 1.0))
def test_gamma_scales_tangent(ts, d, c):
    full = area.AreaProtocolConfig(ts, gamma_e=1.0, alpha0=d)
    part = area.AreaProtocolConfig(ts, gamma_e=c, alpha0=d)
    for fn in (lambda q: area.crib_forward_area(1.0, q), area.crib_backward_output_area):
        assert math.tan(fn(part) / 2) == pytest.approx(c * math.tan(fn(full) / 2), rel=1e-12, abs=1e-300)


@given(st.floats(0.3, 1.0), st.floats(0.0, 10.0), st.floats(0.01, 1.0))
def test_gamma_scales_rose_tangent(tc, x, c):
    kw = dict(theta_s0=0.2, theta_c1=tc * math.pi, theta_c2=tc * math.pi, geometry="forward")
    full = area.rose_closed_form(x, area.AreaProtocolConfig(gamma_e=1.0, **kw))
    part = area.rose_closed_form(x, area.AreaProtocolConfig(gamma_e=c, **kw))
    assert math.tan(part / 2) == pytest.approx(c * math.tan(full / 2), rel=1e-12, abs=1e-300)


@given(st.floats(0.2, 1.0), st.floats(0.0, 10.0), areas)
def test_rose_sources_bounded(tc, x, ts):
    assume(ts < 1.0)
    src = area.rose_sources(np.array([x]), area.AreaProtocolConfig(ts, tc * math.pi, tc * math.pi))
    assert abs(src.p_e[0]) <= 1.0
    assert -1.0 <= src.w_e[0] <= 1.0


@pytest.mark.parametrize("ts", [0.1, 1.0, 2.0, 2.9])
def test_forward_optimum_tracks_transmitted_area(ts):
    # argmax over αL of θ_e sits at 2/|cos θ_s(L)|
    x = np.linspace(0.01, 40.0, 400001)
    th = area.crib_forward_area(x, area.AreaProtocolConfig(ts, geometry="forward"))
    xs = x[int(np.argmax(th))]
    ts_l = area.mccall_hahn_area(xs, ts, 1.0)
    assert xs == pytest.approx(2.0 / abs(math.cos(ts_l)), abs=1e-3)


@given(st.floats(math.pi - 1e-10, math.pi))
def test_bifurcation_inputs_raise(theta):
    with pytest.raises(area.BifurcationError):
        area.mccall_hahn_area(1.0, theta, 1.0)
