import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from echomem.pulses import (
    Pulse,
    SpectrumAmbiguityError,
    energy_efficiency,
    gaussian_pulse,
    read_pulse_csv,
    rms_duration,
    spectral_width_hwem,
    time_reverse,
    write_pulse_csv,
)


@pytest.mark.parametrize("width", [0.3, 0.7, 1.5])
def test_gaussian_hwem_is_inverse_duration(width):
    # long window so the frequency step is fine enough for linear interpolation
    p = gaussian_pulse(1.0 / width, n=16385, span=400.0 / width)
    assert spectral_width_hwem(p) == pytest.approx(width, rel=1e-3)


def test_rms_duration_of_gaussian():
    # |a|² = e^{-t²/δt²} has rms width δt/√2
    p = gaussian_pulse(2.0, n=4097)
    assert rms_duration(p) == pytest.approx(2.0 / math.sqrt(2.0), rel=1e-9)


def test_grid_must_cover_pulse():
    with pytest.raises(ValueError):
        gaussian_pulse(1.0, span=5.0)
    with pytest.raises(ValueError):
        gaussian_pulse(-1.0)


def test_time_reverse_mirrors_about_centre():
    p = gaussian_pulse(1.0, t0=3.0)
    r = time_reverse(p)
    i = int(np.argmax(np.abs(r.envelope)))
    assert r.t[i] == pytest.approx(-3.0, abs=p.dt)


@given(st.floats(-5.0, 5.0), st.floats(0.5, 3.0))
def test_time_reverse_involution_and_energy(t0, dur):
    p = gaussian_pulse(dur, t0=t0, n=513)
    r = time_reverse(p)
    assert np.array_equal(time_reverse(r).envelope, p.envelope)
    assert r.energy == pytest.approx(p.energy, rel=1e-14)


def test_two_lobe_spectrum_is_ambiguous():
    p = gaussian_pulse(4.0, n=4097)
    env = p.envelope * (np.exp(2j * p.t) + np.exp(-2j * p.t))
    with pytest.raises(SpectrumAmbiguityError):
        spectral_width_hwem(p.with_envelope(env))


def test_unresolved_spectrum_is_ambiguous():
    t = np.linspace(-1, 1, 65)
    env = np.zeros(65, dtype=complex)
    env[32] = 1.0
    with pytest.raises(SpectrumAmbiguityError):
        spectral_width_hwem(Pulse(t, env))


def test_energy_efficiency_requires_shared_grid():
    a = gaussian_pulse(1.0, n=513)
    b = gaussian_pulse(1.0, n=257)
    with pytest.raises(ValueError):
        energy_efficiency(a, b)
    assert energy_efficiency(a, a.with_envelope(0.5 * a.envelope)) == pytest.approx(0.25)


def test_pulse_validation():
    with pytest.raises(ValueError):
        Pulse(np.linspace(0, 1, 5), np.ones(4))
    with pytest.raises(ValueError):
        Pulse(np.linspace(0, 1, 5), np.array([1, 1, np.inf, 1, 1]))


def test_csv_roundtrip_is_exact(tmp_path):
    p = gaussian_pulse(1.3, amplitude=0.5 + 0.25j, n=257)
    path = tmp_path / "p.csv"
    write_pulse_csv(p, path, ["note one"])
    text = path.read_text()
    assert text.startswith("# note one\nt,re,im\n")
    q = read_pulse_csv(path)
    assert np.array_equal(q.t, p.t)
    assert np.array_equal(q.envelope, p.envelope)
