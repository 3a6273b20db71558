"""Independent numerical machinery used to check the closed forms.

Nothing in here knows about echo protocols: quadrature, a fixed-step RK4
integrator, golden-section maximisation, special functions and the discrete
Fourier-transform convention shared by the whole package.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

__all__ = [
    "QuadratureError",
    "QuadratureResult",
    "adaptive_quadrature",
    "adaptive_simpson",
    "erfi",
    "scaled_erfi",
    "AreaProfile",
    "integrate_area_ode",
    "maximize_1d",
    "TransformConvention",
    "CONVENTION",
    "time_grid",
    "omega_grid",
    "to_spectrum",
    "from_spectrum",
    "dft_roundtrip",
]


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureResult:
    value: complex | float | np.ndarray
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.error_estimate >= 0:
            raise ValueError("error_estimate must be non-negative")


# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])          # 15 nodes, ascending
_K_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_G_WEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod abscissae (xgk[1], xgk[3], xgk[5], xgk[7]).
_G_WEIGHTS[[1, 3, 5]] = _WG[:3]
_G_WEIGHTS[[13, 11, 9]] = _WG[:3]
_G_WEIGHTS[7] = _WG[3]


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = np.asarray(f(mid + half * _NODES))
    k = half * (fx @ _K_WEIGHTS)
    g = half * (fx @ _G_WEIGHTS)
    # roundoff floor: the rule cannot resolve below ~eps of the absolute integrand mass
    floor = 50.0 * np.finfo(float).eps * abs(half) * float(np.max(np.abs(fx) @ _K_WEIGHTS))
    err = float(np.max(np.abs(k - g))) if np.ndim(k) else float(abs(k - g))
    return k, max(err, floor)


def _map_interval(f, a, b, substitution):
    """Return (g, lo, hi) such that the integral of f over [a, b] equals that of g over [lo, hi]."""
    a_inf, b_inf = math.isinf(a), math.isinf(b)
    if not (a_inf or b_inf):
        return f, a, b
    if substitution not in ("rational", "tanh"):
        raise ValueError(f"unknown substitution {substitution!r}")

    if substitution == "rational":
        def fwd(t):
            return t / (1.0 - t), 1.0 / (1.0 - t) ** 2
    else:
        def fwd(t):
            return np.arctanh(t), 1.0 / (1.0 - t * t)

    if a_inf and b_inf:
        if a > 0 or b < 0:
            raise ValueError("empty interval")

        def g(t):
            x, jac = fwd(np.abs(t))
            return f(np.sign(t) * x) * jac
        return g, -1.0, 1.0
    if b_inf:
        if b < 0:
            raise ValueError("empty interval")

        def g(t):
            x, jac = fwd(t)
            return f(a + x) * jac
        return g, 0.0, 1.0

    def g(t):
        x, jac = fwd(t)
        return f(b - x) * jac
    return g, 0.0, 1.0


def adaptive_quadrature(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    rel_tol: float = 0.0,
    max_subdivisions: int = 5000,
    substitution: str = "rational",
    breakpoints=(),
) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod (7/15) quadrature.

    ``f`` is called with a 1-D array of abscissae and may return either an
    array of the same length or an array of shape ``(..., len(x))``; in the
    latter case all components share one subdivision and the error is the
    max-norm over components.  Infinite limits are mapped onto a finite
    interval (``substitution="rational"`` uses x = t/(1-t), ``"tanh"`` uses
    x = artanh t); the open rule never touches the mapped endpoint.

    The error estimate is the raw |K15 - G7| difference summed over panels,
    which is pessimistic for smooth integrands.
    """
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    if a > b:
        res = adaptive_quadrature(f, b, a, tol, rel_tol=rel_tol, max_subdivisions=max_subdivisions,
                                  substitution=substitution, breakpoints=breakpoints)
        return QuadratureResult(-res.value, res.error_estimate, res.evaluations)

    pts = [a] + sorted(p for p in breakpoints if a < p < b) + [b]
    if len(pts) > 2:
        total, err, n = 0.0, 0.0, 0
        share = tol / (len(pts) - 1)
        for lo, hi in zip(pts[:-1], pts[1:]):
            r = adaptive_quadrature(f, lo, hi, share, rel_tol=rel_tol, max_subdivisions=max_subdivisions,
                                    substitution=substitution)
            total = total + r.value
            err += r.error_estimate
            n += r.evaluations
        return QuadratureResult(total, err, n)

    g, lo, hi = _map_interval(f, a, b, substitution)
    val, err = _gk15(g, lo, hi)
    evaluations = 15
    heap = [(-err, 0, lo, hi, val, err)]
    total_val, total_err = val, err
    counter = 1
    while True:
        scale = float(np.max(np.abs(total_val))) if np.ndim(total_val) else abs(total_val)
        if total_err <= max(tol, rel_tol * scale):
            break
        if counter > max_subdivisions:
            raise QuadratureError(
                f"no convergence after {max_subdivisions} subdivisions (error estimate {total_err:.3e})")
        _, _, x0, x1, v, e = heapq.heappop(heap)
        xm = 0.5 * (x0 + x1)
        if not (x0 < xm < x1):
            raise QuadratureError("interval collapsed below floating-point resolution")
        v1, e1 = _gk15(g, x0, xm)
        v2, e2 = _gk15(g, xm, x1)
        evaluations += 30
        total_val = total_val - v + v1 + v2
        total_err = total_err - e + e1 + e2
        heapq.heappush(heap, (-e1, counter, x0, xm, v1, e1))
        heapq.heappush(heap, (-e2, counter + 1, xm, x1, v2, e2))
        counter += 2
    # recompute the sum from the panels to shed accumulated cancellation error
    total_val = sum(item[4] for item in heap)
    total_err = sum(item[5] for item in heap)
    return QuadratureResult(total_val, max(total_err, 0.0), evaluations)


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 60) -> QuadratureResult:
    """Classic recursive adaptive Simpson rule on a finite interval (scalar integrand)."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("adaptive_simpson needs finite limits")
    count = [0]

    def ev(x):
        count[0] += 1
        return f(x)

    def simpson(fa, fm, fb, lo, hi):
        return (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(lo, hi, fa, fm, fb, whole, eps, depth):
        m = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + m), 0.5 * (m + hi)
        flm, frm = ev(lm), ev(rm)
        left = simpson(fa, flm, fm, lo, m)
        right = simpson(fm, frm, fb, m, hi)
        delta = left + right - whole
        if depth <= 0:
            raise QuadratureError("adaptive Simpson exceeded maximum recursion depth")
        if abs(delta) <= 15.0 * eps:
            return left + right + delta / 15.0, abs(delta) / 15.0
        lv, le = recurse(lo, m, fa, flm, fm, left, eps / 2.0, depth - 1)
        rv, re_ = recurse(m, hi, fm, frm, fb, right, eps / 2.0, depth - 1)
        return lv + rv, le + re_

    fa, fm, fb = ev(a), ev(0.5 * (a + b)), ev(b)
    whole = simpson(fa, fm, fb, a, b)
    val, err = recurse(a, b, fa, fm, fb, whole, tol, max_depth)
    return QuadratureResult(val, err, count[0])


# ---------------------------------------------------------------- special functions

_ERFI_LIMIT = 30.0


def erfi(x):
    """Imaginary error function, restricted to |x| <= 30 (use scaled_erfi beyond)."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > _ERFI_LIMIT):
        raise OverflowError("erfi overflows for |x| > 30; use scaled_erfi")
    out = special.erfi(x)
    return out if out.ndim else float(out)


def scaled_erfi(x):
    """exp(-x**2) * erfi(x) = 2/sqrt(pi) * Dawson(x); finite for every real x."""
    out = 2.0 / math.sqrt(math.pi) * special.dawsn(np.asarray(x, dtype=float))
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------- ODE integration

@dataclass(frozen=True, eq=False)
class AreaProfile:
    """Pulse-area curve sampled on a z grid.

    ``theta`` has shape ``(len(z), *state_shape)``.  The efficiency measures
    are only available when the input signal area is known.
    """

    z: np.ndarray
    theta: np.ndarray
    theta_s0: float | np.ndarray | None = None
    error_estimate: float = 0.0

    @property
    def efficiency_theta(self):
        if self.theta_s0 is None:
            return None
        return np.abs(self.theta / self.theta_s0) ** 2

    @property
    def efficiency_tan(self):
        if self.theta_s0 is None:
            return None
        return np.abs(np.tan(self.theta / 2) / np.tan(np.asarray(self.theta_s0) / 2)) ** 2


def _rk4_segment(rhs, z0, y0, z1, max_step):
    span = z1 - z0
    if span == 0:
        return y0
    n = max(1, math.ceil(abs(span) / max_step - 1e-12))
    h = span / n
    y = y0
    z = z0
    for i in range(n):
        k1 = rhs(z, y)
        k2 = rhs(z + 0.5 * h, y + 0.5 * h * k1)
        k3 = rhs(z + 0.5 * h, y + 0.5 * h * k2)
        k4 = rhs(z + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        z = z0 + (i + 1) * h
    return y


def integrate_area_ode(rhs, theta0, z_span, step, z_eval=None, *, richardson=False,
                       theta_s0=None) -> AreaProfile:
    """Fixed-step classic RK4 for dtheta/dz = rhs(z, theta).

    ``z_span = (z0, z1)`` may run backwards (z1 < z0).  The state may be an
    array of any shape; ``rhs`` must be vectorised over it.  Output is
    sampled exactly at ``z_eval`` (default: both ends), which are reached by
    stepping segment to segment with steps no larger than ``step``.  With
    ``richardson=True`` the run is repeated at half the step and the
    estimate |y_h - y_{h/2}|/15 is reported; the finer solution is returned.
    """
    z0, z1 = map(float, z_span)
    span = abs(z1 - z0)
    if not step > 0 or (span > 0 and step < 1e-14 * span):
        raise ValueError(f"step size {step!r} underflows the integration span")
    if z_eval is None:
        z_eval = np.array([z0, z1])
    z_eval = np.asarray(z_eval, dtype=float)
    direction = 1.0 if z1 >= z0 else -1.0
    if np.any(direction * (z_eval - z0) < -1e-15 * max(span, 1.0)) or \
            np.any(direction * (z1 - z_eval) < -1e-15 * max(span, 1.0)):
        raise ValueError("z_eval points must lie inside z_span")
    order = np.argsort(direction * z_eval, kind="stable")

    def run(h):
        y = np.asarray(theta0, dtype=float)
        z = z0
        out = np.empty((len(z_eval),) + y.shape)
        for idx in order:
            y = _rk4_segment(rhs, z, y, z_eval[idx], h)
            z = z_eval[idx]
            out[idx] = y
        return out

    coarse = run(step)
    err = 0.0
    theta = coarse
    if richardson:
        theta = run(step / 2.0)
        err = float(np.max(np.abs(theta - coarse))) / 15.0 if theta.size else 0.0
    return AreaProfile(z=z_eval, theta=theta, theta_s0=theta_s0, error_estimate=err)


# ---------------------------------------------------------------- optimisation

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def maximize_1d(f: Callable[[float], float], bracket, tol: float = 1e-10, max_iter: int = 500):
    """Golden-section search for the maximum of a unimodal ``f`` on ``bracket``.

    Raises ValueError when the located maximum sits on the bracket boundary.
    """
    a, b = map(float, bracket)
    if not a < b:
        raise ValueError("bracket must satisfy a < b")
    lo, hi = a, b
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    fx = f(x)
    edge = max(10.0 * tol, 1e-9 * (b - a))
    if x - a <= edge or b - x <= edge:
        raise ValueError(f"bracket [{a}, {b}] does not contain an interior maximum (x*={x})")
    return x, fx


# ---------------------------------------------------------------- Fourier convention

@dataclass(frozen=True)
class TransformConvention:
    """ã(ω) = (2π)^(-1/2) ∫ a(t) exp(+iωt) dt on a centred uniform grid.

    The inverse uses exp(-iωt) with the same symmetric normalisation.  Time
    grids are t_n = (n - (N-1)/2)·dt, so they are symmetric about zero and
    time reversal is a plain reversal of the sample order.  Frequencies are
    ω_k = 2π·fftshift(fftfreq(N, dt)), ascending.
    """

    sign: int = +1
    normalization: float = 1.0 / math.sqrt(2.0 * math.pi)
    grid: str = "centered"


CONVENTION = TransformConvention()


def time_grid(n: int, dt: float) -> np.ndarray:
    if n < 2 or not dt > 0:
        raise ValueError("need n >= 2 samples and dt > 0")
    return (np.arange(n) - (n - 1) / 2.0) * dt


def omega_grid(n: int, dt: float) -> np.ndarray:
    return 2.0 * np.pi * np.fft.fftshift(np.fft.fftfreq(n, dt))


def _grid_step(t):
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("grid must be 1-D with at least two points")
    d = np.diff(t)
    if np.any(d <= 0) or np.max(np.abs(d - d[0])) > 1e-9 * abs(d[0]):
        raise ValueError("grid must be strictly increasing and uniform")
    return float(t[1] - t[0])


def to_spectrum(t, a):
    """Return (omega, spectrum) of envelope ``a`` sampled on ``t``."""
    t = np.asarray(t, dtype=float)
    dt = _grid_step(t)
    a = np.asarray(a, dtype=complex)
    n = a.size
    w = omega_grid(n, dt)
    spec = np.fft.fftshift(n * np.fft.ifft(a)) * np.exp(1j * w * t[0]) * dt * CONVENTION.normalization
    return w, spec


def from_spectrum(omega, spec, t):
    """Inverse of :func:`to_spectrum` onto the time grid ``t``."""
    t = np.asarray(t, dtype=float)
    dw = _grid_step(omega)
    spec = np.asarray(spec, dtype=complex)
    shifted = np.fft.ifftshift(spec * np.exp(-1j * np.asarray(omega) * t[0]))
    return np.fft.fft(shifted) * dw * CONVENTION.normalization


def dft_roundtrip(t, a):
    w, s = to_spectrum(t, a)
    return from_spectrum(w, s, np.asarray(t, dtype=float))
