"""Inhomogeneous line shapes, complex susceptibility and absorption.

Frequencies are detunings from line centre.  The line density G is
normalised to unit area in detuning, so that for a Lorentzian of half-width
Δ_in the susceptibility is χ(ω) = 1/(Δ_in + γ - iω) with γ = 1/T2, and the
resonant absorption coefficient is α_R(ω) = π β G(ω).  The Gaussian line
uses Δ_in as its full width at half maximum, G ∝ exp(-4 ln2 ω²/Δ_in²).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .oracle import adaptive_quadrature

__all__ = [
    "ZETA",
    "GAUSSIAN_T2_FLOOR",
    "LineShape",
    "InhomogeneousLine",
    "Medium",
    "DephasingFactor",
    "chi",
    "absorption_coefficient",
    "resonant_absorption",
    "coherence_map",
]

ZETA = 4.0 * math.log(2.0)
# 1/T2 used for the Gaussian principal-value integral when T2 is infinite, in units of Δ_in.
GAUSSIAN_T2_FLOOR = 1e-6


class LineShape(str, Enum):
    LORENTZIAN = "lorentzian"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class InhomogeneousLine:
    shape: LineShape = LineShape.LORENTZIAN
    delta_in: float = 1.0
    t2: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "shape", LineShape(self.shape))
        if not (self.delta_in > 0 and math.isfinite(self.delta_in)):
            raise ValueError("delta_in must be positive and finite")
        if not self.t2 > 0:
            raise ValueError("t2 must be positive (math.inf allowed)")

    @property
    def gamma(self) -> float:
        """Homogeneous half-width 1/T2 (zero for infinite T2)."""
        return 0.0 if math.isinf(self.t2) else 1.0 / self.t2

    def density(self, delta):
        """Normalised line density G(δ) (unit area over detuning)."""
        x = np.asarray(delta, dtype=float) / self.delta_in
        if self.shape is LineShape.LORENTZIAN:
            return 1.0 / (math.pi * self.delta_in * (1.0 + x * x))
        return math.sqrt(ZETA / math.pi) / self.delta_in * np.exp(-ZETA * x * x)

    def profile(self, omega):
        """G(ω)/G(0): the resonant absorption relative to line centre."""
        x = np.asarray(omega, dtype=float) / self.delta_in
        if self.shape is LineShape.LORENTZIAN:
            return 1.0 / (1.0 + x * x)
        return np.exp(-ZETA * x * x)


LORENTZIAN = InhomogeneousLine()


@dataclass(frozen=True)
class Medium:
    beta: float
    length: float
    v_g: float = 1.0

    def __post_init__(self):
        if not self.beta >= 0:
            raise ValueError("beta must be non-negative")
        if not self.length > 0:
            raise ValueError("length must be positive")

    def depth(self, line: InhomogeneousLine) -> float:
        """Resonant optical depth α_R(0)·L."""
        return math.pi * self.beta * float(line.density(0.0)) * self.length

    @classmethod
    def from_depth(cls, depth: float, line: InhomogeneousLine, length: float = 1.0, v_g: float = 1.0):
        beta = depth / (math.pi * float(line.density(0.0)) * length)
        return cls(beta=beta, length=length, v_g=v_g)


@dataclass(frozen=True)
class DephasingFactor:
    """Ensemble phase-relaxation factor Γ(t_e) multiplying the echo amplitude."""

    gamma_e: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.gamma_e <= 1.0:
            raise ValueError("gamma_e must lie in [0, 1]")

    @classmethod
    def exponential(cls, t_e: float, t2: float):
        # the functional form of Γ(t_e) is a modelling choice; exp(-t_e/T2) is only a convenience
        return cls(math.exp(-t_e / t2))

    def __float__(self):
        return float(self.gamma_e)


def _check_omega(omega):
    w = np.asarray(omega, dtype=float)
    if not np.all(np.isfinite(w)):
        raise ValueError("omega must be finite")
    return w


def _chi_quadrature_point(density, w, gamma, scale, tol):
    """χ(ω) = ∫ G(δ) / (γ + i(δ - ω)) dδ for one ω, by folding about δ = ω.

    With u = δ - ω the integrand becomes
    [γ (G(ω+u) + G(ω-u)) - i u (G(ω+u) - G(ω-u))] / (γ² + u²) on u ≥ 0.
    The Lorentzian kernel varies on the scale γ, so the half-line is cut at
    geometric breakpoints from γ up to a few line widths past |ω|.
    """

    def integrand(u):
        gp = density(w + u)
        gm = density(w - u)
        return (gamma * (gp + gm) - 1j * u * (gp - gm)) / (gamma * gamma + u * u)

    top = abs(w) + 20.0 * scale
    pts = [gamma]
    while pts[-1] * 10.0 < top:
        pts.append(pts[-1] * 10.0)
    pts += [abs(w) - scale, abs(w), abs(w) + scale, top]
    pts = sorted(p for p in set(pts) if p > 0)
    res = adaptive_quadrature(integrand, 0.0, math.inf, tol, breakpoints=pts)
    return complex(res.value)


def chi(line: InhomogeneousLine, omega, method: str = "auto", tol: float = 1e-10):
    """Complex susceptibility χ(ω) of the line.

    ``method="closed"`` is only available for the Lorentzian, ``"quadrature"``
    integrates the defining convolution for any shape, ``"auto"`` picks the
    closed form when it exists.  For a Gaussian with infinite T2 the kernel is
    regularised with 1/T2 = GAUSSIAN_T2_FLOOR·Δ_in.
    """
    w = _check_omega(omega)
    if method == "auto":
        method = "closed" if line.shape is LineShape.LORENTZIAN else "quadrature"
    if method == "closed":
        if line.shape is not LineShape.LORENTZIAN:
            raise ValueError("closed-form χ only exists for the Lorentzian line")
        out = 1.0 / (line.delta_in + line.gamma - 1j * w)
        return out if out.ndim else complex(out)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    gamma = line.gamma if line.gamma > 0 else GAUSSIAN_T2_FLOOR * line.delta_in
    flat = np.atleast_1d(w).ravel()
    vals = np.array([_chi_quadrature_point(line.density, float(x), gamma, line.delta_in,
                                           tol / line.delta_in) for x in flat])
    return vals.reshape(w.shape) if w.ndim else complex(vals[0])


def absorption_coefficient(medium: Medium, line: InhomogeneousLine, omega, method: str = "auto"):
    """Complex absorption coefficient α(ω) = β χ(ω)."""
    return medium.beta * chi(line, omega, method=method)


def resonant_absorption(medium: Medium, line: InhomogeneousLine, omega):
    """α_R(ω) = π β G(ω): real, even and non-negative for symmetric lines."""
    out = math.pi * medium.beta * line.density(_check_omega(omega))
    return out if np.ndim(out) else float(out)


def coherence_map(omega, spectrum, z, medium: Medium, line: InhomogeneousLine, method: str = "auto"):
    """Atomic coherence σ(Δ, z) ∝ i ã_s(0, Δ) exp(-α(Δ) z) after the signal is absorbed.

    Rows follow ``omega`` (the atomic detuning Δ), columns follow ``z``.  The
    free-evolution phase exp(-iΔτ) is left out.
    """
    omega = _check_omega(omega)
    spectrum = np.asarray(spectrum, dtype=complex)
    if omega.ndim != 1 or spectrum.shape != omega.shape:
        raise ValueError("spectrum must be sampled on the omega grid")
    z = np.asarray(z, dtype=float)
    alpha = absorption_coefficient(medium, line, omega, method=method)
    return 1j * spectrum[:, None] * np.exp(-np.outer(alpha, z))
