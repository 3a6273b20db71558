import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from echomem import oracle


def test_gk15_polynomial_exact():
    res = oracle.adaptive_quadrature(lambda x: 3 * x**2 - 2 * x + 1, -1.0, 2.0, 1e-13)
    assert res.value == pytest.approx(9.0 - 3.0 + 3.0, abs=1e-13)
    assert res.error_estimate > 0


@pytest.mark.parametrize("sub", ["rational", "tanh"])
def test_gk15_infinite_gaussian(sub):
    res = oracle.adaptive_quadrature(lambda x: np.exp(-x * x), -math.inf, math.inf, 1e-12, substitution=sub)
    assert res.value == pytest.approx(math.sqrt(math.pi), abs=1e-11)


def test_gk15_endpoint_singularity():
    res = oracle.adaptive_quadrature(lambda x: 1.0 / np.sqrt(x), 0.0, 1.0, 1e-10)
    assert res.value == pytest.approx(2.0, abs=1e-9)


def test_gk15_breakpoints_help_kink():
    f = lambda x: np.abs(x - 0.3)  # noqa: E731
    res = oracle.adaptive_quadrature(f, 0.0, 1.0, 1e-13, breakpoints=(0.3,))
    assert res.value == pytest.approx(0.5 * (0.09 + 0.49), abs=1e-13)


def test_gk15_vector_valued():
    k = np.array([1.0, 2.0, 3.0])
    res = oracle.adaptive_quadrature(lambda x: np.cos(k[:, None] * x), 0.0, math.pi / 2, 1e-12)
    assert np.allclose(res.value, np.sin(k * math.pi / 2) / k, atol=1e-12)


def test_simpson_agrees_with_gk15():
    f = lambda x: np.exp(-x) * np.cos(3 * x)  # noqa: E731
    a = oracle.adaptive_simpson(f, 0.0, 4.0, 1e-11).value
    b = oracle.adaptive_quadrature(f, 0.0, 4.0, 1e-12).value
    assert a == pytest.approx(b, abs=1e-9)


def test_quadrature_failure_raises():
    with pytest.raises(oracle.QuadratureError):
        oracle.adaptive_quadrature(lambda x: np.sin(1.0 / x) / x, 1e-9, 1.0, 1e-14, max_subdivisions=50)


def test_erfi_matches_scipy():
    x = np.linspace(-4, 4, 41)
    assert np.allclose(oracle.erfi(x), special.erfi(x), rtol=1e-13, atol=1e-300)


def test_scaled_erfi_large_argument_asymptote():
    x = np.array([20.0, 50.0, 200.0])
    assert np.allclose(oracle.scaled_erfi(x), 1.0 / (math.sqrt(math.pi) * x), rtol=3e-3)


@given(st.floats(-6.0, 6.0))
def test_scaled_erfi_odd(x):
    assert oracle.scaled_erfi(-x) == pytest.approx(-oracle.scaled_erfi(x), abs=1e-15)


def test_integrate_area_ode_exponential_decay():
    prof = oracle.integrate_area_ode(lambda z, y: -0.5 * y, np.array([1.0]), (0.0, 4.0), 1e-2,
                                     [0.0, 2.0, 4.0], richardson=True)
    assert np.allclose(prof.theta[:, 0], np.exp(-0.5 * np.array([0.0, 2.0, 4.0])), atol=1e-10)
    assert prof.error_estimate < 1e-9


def test_maximize_1d_interior():
    x, fx = oracle.maximize_1d(lambda x: -(x - 0.7) ** 2 + 3, (0.0, 2.0))
    assert x == pytest.approx(0.7, abs=1e-7)
    assert fx == pytest.approx(3.0)


def test_maximize_1d_edge_refused():
    with pytest.raises(ValueError):
        oracle.maximize_1d(lambda x: x, (0.0, 1.0))


def test_time_and_omega_grids_centered():
    t = oracle.time_grid(9, 0.5)
    assert t[4] == 0.0 and t[0] == -2.0
    w = oracle.omega_grid(9, 0.5)
    assert np.any(w == 0.0)
    assert np.allclose(w, -w[::-1])


def test_transform_of_gaussian_is_gaussian():
    t = oracle.time_grid(1025, 0.05)
    w, s = oracle.to_spectrum(t, np.exp(-t * t / 2))
    # (2π)^{-1/2} ∫ e^{-t²/2} e^{iωt} dt = e^{-ω²/2}
    inside = np.abs(w) < 8
    assert np.allclose(s[inside], np.exp(-w[inside] ** 2 / 2), atol=1e-12)


def test_transform_sign_convention():
    # a(t) = e^{-t²/2} e^{-iω₀t} has its spectrum centred at +ω₀ under e^{+iωt}
    t = oracle.time_grid(2049, 0.05)
    w, s = oracle.to_spectrum(t, np.exp(-t * t / 2) * np.exp(-1j * 2.0 * t))
    assert w[np.argmax(np.abs(s))] == pytest.approx(2.0, abs=0.05)


@given(st.integers(16, 300), st.floats(0.01, 2.0), st.integers(0, 2**31 - 1))
def test_dft_roundtrip(n, dt, seed):
    rng = np.random.default_rng(seed)
    t = oracle.time_grid(n, dt)
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    assert np.max(np.abs(oracle.dft_roundtrip(t, a) - a)) < 1e-12 * max(1.0, np.max(np.abs(a)))


@given(st.integers(16, 300), st.integers(0, 2**31 - 1))
def test_parseval(n, seed):
    rng = np.random.default_rng(seed)
    t = oracle.time_grid(n, 0.1)
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    w, s = oracle.to_spectrum(t, a)
    e_t = np.sum(np.abs(a) ** 2) * 0.1
    e_w = np.sum(np.abs(s) ** 2) * (w[1] - w[0])
    assert e_w == pytest.approx(e_t, rel=1e-12)
