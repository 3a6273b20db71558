"""RK4 counterparts of the closed-form area solutions.

Each function integrates the echo-area equation together with the
McCall–Hahn equations of the pulses that prepare the sources.  None of them
calls the closed forms in :mod:`echomem.area`; they are the oracles those
closed forms are checked against.  All grids are vectorised into one state
array so a full 50×50 sweep is a single integration.
"""

from __future__ import annotations

import numpy as np

from .area import area_ode_rhs
from .oracle import integrate_area_ode

__all__ = [
    "default_step",
    "ode_mccall_hahn",
    "ode_crib_forward",
    "ode_crib_backward",
    "ode_control_areas",
    "ode_rose",
]


def default_step(alpha0: float, length: float) -> float:
    """h = min(1e-3/α₀, L/1e4)."""
    return min(1e-3 / alpha0, length / 1e4) if alpha0 > 0 else length / 1e4


def _mesh(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.broadcast_to(a[:, None], (a.size, b.size)).copy(), b


def ode_mccall_hahn(theta0, depths, richardson=False):
    """θ(α₀z) from dθ/dz = -(α/2) sin θ with α = 1; shape (len(theta0), len(depths))."""
    theta0 = np.asarray(theta0, dtype=float)
    depths = np.asarray(depths, dtype=float)
    top = float(depths.max())

    def rhs(z, y):
        return -0.5 * np.sin(y)

    prof = integrate_area_ode(rhs, theta0, (0.0, top), default_step(1.0, top), depths, richardson=richardson)
    return prof.theta.T, prof.error_estimate


def ode_crib_forward(theta_s0, depths, gamma_e=1.0, richardson=False):
    """Forward CRIB echo area θ_e(α₀z) with sources P = Γ sin θ_s, W = -cos θ_s."""
    theta_s0 = np.asarray(theta_s0, dtype=float)
    depths = np.asarray(depths, dtype=float)
    top = float(depths.max())

    def rhs(z, y):
        ts, te = y
        return np.stack([-0.5 * np.sin(ts),
                         area_ode_rhs(te, gamma_e * np.sin(ts), -np.cos(ts), 1.0, +1)])

    y0 = np.stack([theta_s0, np.zeros_like(theta_s0)])
    prof = integrate_area_ode(rhs, y0, (0.0, top), default_step(1.0, top), depths, richardson=richardson)
    return prof.theta[:, 1, :].T, prof.error_estimate


def ode_crib_backward(theta_s0, depths, zeta_eval=(0.0,), gamma_e=1.0, richardson=False):
    """Backward CRIB echo area at fractional positions z/L for each (θ_s(0), α₀L).

    In the scaled coordinate ζ = z/L every depth is a separate problem on
    [0, 1]: the signal is first propagated to ζ = 1, then signal and echo
    are integrated together back to ζ = 0 starting from θ_e(1) = 0.
    Returns shape (len(zeta_eval), len(theta_s0), len(depths)).
    """
    ts0, d = _mesh(theta_s0, depths)
    step = min(1e-3 / float(d.max()), 1e-4)

    def signal(z, y):
        return -0.5 * d * np.sin(y)

    ts_end = integrate_area_ode(signal, ts0, (0.0, 1.0), step, [1.0]).theta[0]

    def joint(z, y):
        ts, te = y
        return np.stack([-0.5 * d * np.sin(ts),
                         area_ode_rhs(te, gamma_e * np.sin(ts), -np.cos(ts), d, -1)])

    zeta_eval = np.asarray(zeta_eval, dtype=float)
    y1 = np.stack([ts_end, np.zeros_like(ts_end)])
    prof = integrate_area_ode(joint, y1, (1.0, 0.0), step, zeta_eval, richardson=richardson)
    return prof.theta[:, 1], prof.error_estimate


def ode_control_areas(theta_c1, theta_c2, depths, richardson=False):
    """Control areas after propagation; pulse 2 sees the inversion -cos θ₁ left by pulse 1.

    ``theta_c1`` and ``theta_c2`` are equal-length arrays of input areas.
    Returns (θ₁, θ₂), each of shape (len(theta_c1), len(depths)).
    """
    depths = np.asarray(depths, dtype=float)
    top = float(depths.max())

    def rhs(z, y):
        t1, t2 = y
        return np.stack([-0.5 * np.sin(t1), -0.5 * np.cos(t1) * np.sin(t2)])

    y0 = np.stack([np.asarray(theta_c1, dtype=float), np.asarray(theta_c2, dtype=float)])
    prof = integrate_area_ode(rhs, y0, (0.0, top), default_step(1.0, top), depths, richardson=richardson)
    return prof.theta[:, 0, :].T, prof.theta[:, 1, :].T, prof.error_estimate


def ode_rose(theta_c, depths, theta_s0, gamma_e=1.0, richardson=False):
    """Forward ROSE echo area with equal controls θ₁(0) = θ₂(0) = θ_c.

    The weak signal decays linearly, dθ_s/dz = -(α/2)θ_s, and the echo is
    driven by P = Γ θ_s sin²(θ₁/2) sin²(θ₂/2), W = -cos θ₁ cos θ₂.
    Returns shape (len(theta_c), len(depths)).
    """
    theta_c = np.asarray(theta_c, dtype=float)
    depths = np.asarray(depths, dtype=float)
    top = float(depths.max())

    def rhs(z, y):
        ts, t1, t2, te = y
        p = gamma_e * ts * np.sin(t1 / 2.0) ** 2 * np.sin(t2 / 2.0) ** 2
        w = -np.cos(t1) * np.cos(t2)
        return np.stack([-0.5 * ts, -0.5 * np.sin(t1), -0.5 * np.cos(t1) * np.sin(t2),
                         area_ode_rhs(te, p, w, 1.0, +1)])

    y0 = np.stack([np.full_like(theta_c, theta_s0), theta_c, theta_c, np.zeros_like(theta_c)])
    prof = integrate_area_ode(rhs, y0, (0.0, top), default_step(1.0, top), depths, richardson=richardson)
    return prof.theta[:, 3, :].T, prof.error_estimate
