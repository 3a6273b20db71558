"""Pulse-area description of photon echoes in a two-level medium.

The echo area obeys
    ±dθ_e/dz = (α/2) [2 P_e cos²(θ_e/2) + W_e sin θ_e]
with the sign set by the emission direction.  Written for u = tan(θ_e/2)
this is the linear equation ±du/dz = (α/2)(P_e + W_e u), which is what the
closed forms below solve.  Areas are in radians and depths are α_R(0)z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .oracle import AreaProfile, QuadratureError, adaptive_quadrature

__all__ = [
    "Geometry",
    "AreaProtocolConfig",
    "EchoSource",
    "BifurcationError",
    "BIFURCATION_TOL",
    "mccall_hahn_area",
    "area_ode_rhs",
    "crib_backward_area",
    "crib_backward_output_area",
    "crib_forward_area",
    "crib_area_profile",
    "control_pulse_areas",
    "rose_sources",
    "rose_formal_solution",
    "rose_closed_form",
    "efficiency_measures",
    "rose_gain_map",
    "crib_area_map",
]

BIFURCATION_TOL = 1e-9


class Geometry(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"

    @property
    def sign(self) -> int:
        return 1 if self is Geometry.FORWARD else -1


class BifurcationError(ValueError):
    """The tangent parametrisation is singular at an area of exactly π."""


def _check_not_pi(theta, name):
    if np.any(np.abs(np.asarray(theta, dtype=float) - math.pi) < BIFURCATION_TOL):
        raise BifurcationError(f"{name} = π is a bifurcation point of the area solution")


@dataclass(frozen=True)
class AreaProtocolConfig:
    theta_s0: float
    theta_c1: float = math.pi
    theta_c2: float = math.pi
    gamma_e: float = 1.0
    alpha0: float = 1.0
    length: float = 1.0
    geometry: Geometry = Geometry.BACKWARD

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        if not 0.0 <= self.theta_s0 < math.pi:
            raise ValueError("theta_s0 must lie in [0, π)")
        for name in ("theta_c1", "theta_c2"):
            if not 0.0 <= getattr(self, name) <= math.pi:
                raise ValueError(f"{name} must lie in [0, π]")
        if not 0.0 <= self.gamma_e <= 1.0:
            raise ValueError("gamma_e must lie in [0, 1]")
        if not (self.alpha0 >= 0 and self.length > 0):
            raise ValueError("need alpha0 >= 0 and length > 0")

    @property
    def depth(self) -> float:
        return self.alpha0 * self.length


@dataclass(frozen=True, eq=False)
class EchoSource:
    """Phasing polarisation P_e(z) and inversion W_e(z) left behind by the pulses."""

    p_e: np.ndarray
    w_e: np.ndarray


def mccall_hahn_area(z, theta0, alpha0):
    """θ(z) = 2 arctan(tan(θ₀/2) e^{-α z/2})."""
    _check_not_pi(theta0, "theta0")
    if np.any(np.asarray(theta0) < 0) or np.any(np.asarray(theta0) > math.pi):
        raise ValueError("theta0 must lie in [0, π)")
    out = 2.0 * np.arctan(np.tan(np.asarray(theta0) / 2.0) * np.exp(-alpha0 * np.asarray(z, dtype=float) / 2.0))
    return out if np.ndim(out) else float(out)


def area_ode_rhs(theta_e, p_e, w_e, alpha0, geometry_sign=1):
    """dθ_e/dz; ``geometry_sign`` is +1 for forward and -1 for backward emission."""
    theta_e = np.asarray(theta_e, dtype=float)
    half = np.cos(theta_e / 2.0)
    return geometry_sign * 0.5 * alpha0 * (2.0 * p_e * half * half + w_e * np.sin(theta_e))


def _tan_half(theta):
    _check_not_pi(theta, "theta_s0")
    return math.tan(theta / 2.0)


def crib_backward_area(z, cfg: AreaProtocolConfig):
    """Echo area inside the medium for backward retrieval.

    tan(θ_e(z)/2) = Γ s e^{-αz/2}(1 - e^{-α(L-z)}) / (1 + s² e^{-αL}), s = tan(θ_s(0)/2).
    """
    s = _tan_half(cfg.theta_s0)
    z = np.asarray(z, dtype=float)
    a, big = cfg.alpha0, cfg.depth
    u = cfg.gamma_e * s * np.exp(-a * z / 2.0) * -np.expm1(-a * (cfg.length - z)) / (1.0 + s * s * math.exp(-big))
    out = 2.0 * np.arctan(u)
    return out if out.ndim else float(out)


def crib_backward_output_area(cfg: AreaProtocolConfig) -> float:
    """θ_e at the entrance face: tan(θ_e/2) = Γ s (1 - e^{-αL}) / (1 + s² e^{-αL})."""
    s = _tan_half(cfg.theta_s0)
    e = math.exp(-cfg.depth)
    return 2.0 * math.atan(cfg.gamma_e * s * -math.expm1(-cfg.depth) / (1.0 + s * s * e))


def crib_forward_area(z, cfg: AreaProtocolConfig):
    """tan(θ_e/2) = Γ s αz e^{-αz/2} / (1 + s² e^{-αz}) for forward retrieval."""
    s = _tan_half(cfg.theta_s0)
    x = cfg.alpha0 * np.asarray(z, dtype=float)
    out = 2.0 * np.arctan(cfg.gamma_e * s * x * np.exp(-x / 2.0) / (1.0 + s * s * np.exp(-x)))
    return out if out.ndim else float(out)


def crib_area_profile(z, cfg: AreaProtocolConfig) -> AreaProfile:
    z = np.asarray(z, dtype=float)
    fn = crib_forward_area if cfg.geometry is Geometry.FORWARD else crib_backward_area
    return AreaProfile(z=z, theta=np.asarray(fn(z, cfg)), theta_s0=cfg.theta_s0)


def control_pulse_areas(z, theta_c1, theta_c2, alpha0):
    """Areas of two control pulses after the first has inverted the medium.

    tan(θ₁/2) = β₁ e^{-αz/2},  tan(θ₂/2) = β₂ (1 + β₁²) e^{αz/2} / (e^{αz} + β₁²),
    with β_i = tan(θ_i(0)/2).
    """
    _check_not_pi(theta_c1, "theta_c1")
    _check_not_pi(theta_c2, "theta_c2")
    b1, b2 = math.tan(theta_c1 / 2.0), math.tan(theta_c2 / 2.0)
    x = alpha0 * np.asarray(z, dtype=float)
    t1 = 2.0 * np.arctan(b1 * np.exp(-x / 2.0))
    t2 = 2.0 * np.arctan(b2 * (1.0 + b1 * b1) * np.exp(x / 2.0) / (np.exp(x) + b1 * b1))
    if t1.ndim:
        return t1, t2
    return float(t1), float(t2)


def _cot2_half(theta):
    """cot²(θ/2); zero at θ = π, so π controls need no special case."""
    if theta <= 0:
        raise ValueError("control areas must be positive for the closed ROSE solution")
    c = math.cos(theta / 2.0) / math.sin(theta / 2.0)
    return c * c


def _half_sines(x, c1, c2):
    e = np.exp(x)
    s1 = 1.0 / (1.0 + c1 * e)
    num = (1.0 + c1) ** 2 * e
    s2 = num / (c2 * (1.0 + c1 * e) ** 2 + num)
    return s1, s2


def rose_sources(z, cfg: AreaProtocolConfig) -> EchoSource:
    """P_e = Γ θ_s(0) e^{-αz/2} sin²(θ₁/2) sin²(θ₂/2),  W_e = -cos θ₁ cos θ₂."""
    x = cfg.alpha0 * np.asarray(z, dtype=float)
    if cfg.theta_c1 == 0.0:
        p = np.zeros_like(x)
        _, t2 = control_pulse_areas(z, 0.0, cfg.theta_c2, cfg.alpha0)
        return EchoSource(p, -np.cos(t2) + 0.0 * x)
    c1, c2 = _cot2_half(cfg.theta_c1), (_cot2_half(cfg.theta_c2) if cfg.theta_c2 > 0 else math.inf)
    if math.isinf(c2):
        s1, s2 = 1.0 / (1.0 + c1 * np.exp(x)), np.zeros_like(x)
    else:
        s1, s2 = _half_sines(x, c1, c2)
    p = cfg.gamma_e * cfg.theta_s0 * np.exp(-x / 2.0) * s1 * s2
    w = -(1.0 - 2.0 * s1) * (1.0 - 2.0 * s2)
    return EchoSource(p, w)


def rose_formal_solution(z, cfg: AreaProtocolConfig, *, double_count: bool = False, tol: float = 1e-11):
    """θ_e(z) = 2 arctan{(Γθ_s(0)α/2) ∫₀^z P̂(z') exp[(α/2)∫_{z'}^z W_e] dz'} by nested quadrature.

    P̂ is the source with Γθ_s(0) divided out, so the prefactor is applied
    once.  ``double_count=True`` keeps Γθ_s(0) inside the source as well.
    """
    z = float(z)
    if z < 0:
        raise ValueError("z must be non-negative")
    if z == 0 or cfg.theta_s0 == 0 or cfg.gamma_e == 0:
        return 0.0
    a = cfg.alpha0
    pref = cfg.gamma_e * cfg.theta_s0
    unit = AreaProtocolConfig(1.0, cfg.theta_c1, cfg.theta_c2, 1.0, a, cfg.length, cfg.geometry)

    def w_e(zz):
        return rose_sources(zz, unit).w_e

    def outer(zp):
        src = rose_sources(zp, unit).p_e
        inner = np.array([adaptive_quadrature(w_e, float(q), z, tol).value for q in np.atleast_1d(zp)])
        return src * np.exp(0.5 * a * inner)

    try:
        res = adaptive_quadrature(outer, 0.0, z, tol)
    except QuadratureError as exc:
        raise QuadratureError(f"formal ROSE integral did not converge at z={z}: {exc}") from exc
    scale = pref * pref if double_count else pref
    return float(2.0 * math.atan(scale * 0.5 * a * res.value))


def _rose_phi_a(x, c1, c2):
    e = np.exp(x)
    a = x + np.log((1.0 + c1) / (1.0 + c1 * e)) + c1 * (1.0 - e) / ((1.0 + c1) * (1.0 + c1 * e))
    phi = np.sqrt(e) * (1.0 + c1) ** 2 * (1.0 + c1 * e) / (
        c2 + (2.0 * c1 * c2 + (1.0 + c1) ** 2) * e + c1 * c1 * c2 * e * e)
    return phi * a


def rose_closed_form(z, cfg: AreaProtocolConfig):
    """θ_e(z) = 2 arctan{(Γθ_s(0)/2) Φ(z) A(z)} for forward ROSE with weak signal.

    Evaluated through c_i = cot²(θ_i(0)/2) so that π controls are regular.
    A zero first control makes the solution singular and raises ValueError.
    """
    if cfg.theta_c1 <= 0:
        raise ValueError("rose_closed_form needs a non-zero first control area")
    c1 = _cot2_half(cfg.theta_c1)
    c2 = _cot2_half(cfg.theta_c2) if cfg.theta_c2 > 0 else math.inf
    x = cfg.alpha0 * np.asarray(z, dtype=float)
    if math.isinf(c2):
        out = np.zeros_like(x)
    else:
        out = 2.0 * np.arctan(0.5 * cfg.gamma_e * cfg.theta_s0 * _rose_phi_a(x, c1, c2))
    return out if out.ndim else float(out)


def efficiency_measures(theta_e, theta_s0):
    """(η_θ, η_t) = (|θ_e/θ_s0|², |tan(θ_e/2)/tan(θ_s0/2)|²)."""
    theta_s0 = np.asarray(theta_s0, dtype=float)
    if np.any(theta_s0 == 0):
        raise ValueError("efficiency is undefined for a zero input area")
    theta_e = np.asarray(theta_e, dtype=float)
    eta_theta = np.abs(theta_e / theta_s0) ** 2
    eta_tan = np.abs(np.tan(theta_e / 2.0) / np.tan(theta_s0 / 2.0)) ** 2
    if eta_theta.ndim:
        return eta_theta, eta_tan
    return float(eta_theta), float(eta_tan)


def rose_gain_map(theta_c_grid, depth_grid, gamma_e: float = 1.0, theta_s0: float | None = None):
    """η_θ over (θ_c, α₀z) with θ₁(0) = θ₂(0) = θ_c.

    With ``theta_s0=None`` the weak-signal limit (Γ Φ A)² is returned.
    Rows follow ``theta_c_grid``.
    """
    theta_c_grid = np.asarray(theta_c_grid, dtype=float)
    x = np.asarray(depth_grid, dtype=float)
    out = np.empty((theta_c_grid.size, x.size))
    for i, tc in enumerate(theta_c_grid):
        if tc <= 0:
            out[i] = 0.0
            continue
        c = _cot2_half(tc)
        if theta_s0 is None:
            out[i] = (gamma_e * _rose_phi_a(x, c, c)) ** 2
        else:
            cfg = AreaProtocolConfig(theta_s0, tc, tc, gamma_e, 1.0, 1.0, Geometry.FORWARD)
            out[i] = efficiency_measures(rose_closed_form(x, cfg), theta_s0)[0]
    return out


def crib_area_map(theta_s_grid, depth_grid, geometry=Geometry.BACKWARD, gamma_e: float = 1.0,
                  measure: str = "theta"):
    """Echo efficiency over (θ_s(0), α₀L); rows follow ``theta_s_grid``.

    Backward retrieval is read at the entrance face, forward at z = L.
    ``measure`` selects η_θ ("theta") or η_t ("tan").
    """
    geometry = Geometry(geometry)
    if measure not in ("theta", "tan"):
        raise ValueError("measure must be 'theta' or 'tan'")
    theta_s_grid = np.asarray(theta_s_grid, dtype=float)
    depth_grid = np.asarray(depth_grid, dtype=float)
    out = np.empty((theta_s_grid.size, depth_grid.size))
    for i, ts in enumerate(theta_s_grid):
        for j, d in enumerate(depth_grid):
            cfg = AreaProtocolConfig(ts, gamma_e=gamma_e, alpha0=d, length=1.0, geometry=geometry)
            th = crib_forward_area(1.0, cfg) if geometry is Geometry.FORWARD else crib_backward_output_area(cfg)
            out[i, j] = efficiency_measures(th, ts)[0 if measure == "theta" else 1]
    return out
