"""Atomic frequency comb storage: transfer functions, comb dispersion and design search.

The comb lives inside a spectral window of width Δ₀ cut into the host line.
Frequencies are in units of Δ_in.  The dispersion analysis uses a Gaussian
host and a normalised susceptibility χ̂ = χ̂' + iχ̂'' with χ̂''(0) = -1 for
the bare line, so that a field crossing the medium picks up
exp(-i d χ̂(ω)) with d = α_R(0)L of the host.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .lineshape import LORENTZIAN, ZETA, InhomogeneousLine, LineShape
from .oracle import adaptive_quadrature, scaled_erfi

__all__ = [
    "AfcComb",
    "DispersionDecomposition",
    "SingularPointError",
    "afc_dephasing",
    "afc_forward_transfer",
    "afc_backward_transfer",
    "chi_comb",
    "chi_wings",
    "chi_total",
    "afc_dispersion_transfer",
    "afc_efficiency",
    "plateau_halfwidth",
    "in_window",
    "EDGE_RTOL",
    "AfcDesign",
    "afc_design_search",
    "afc_efficiency_map",
    "afc_dispersion_map",
]

PLATEAU_FRACTION = 0.05


class SingularPointError(ArithmeticError):
    """χ''(ω) vanishes, so the dispersion factor is undefined."""


def afc_dephasing(finesse):
    """Γ_afc = exp(-7/(2 f²)) for Gaussian teeth of finesse f."""
    f = np.asarray(finesse, dtype=float)
    if np.any(f <= 0):
        raise ValueError("finesse must be positive")
    out = np.exp(-7.0 / (2.0 * f * f))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class AfcComb:
    finesse: float
    depth: float = 0.0
    delta0: float = math.inf
    delta_afc: float = 2.0 * math.pi
    host: InhomogeneousLine = field(default=LORENTZIAN)

    def __post_init__(self):
        if not self.finesse > 1:
            raise ValueError("finesse must exceed 1")
        if not self.delta0 > 0:
            raise ValueError("delta0 must be positive")
        if not self.depth >= 0:
            raise ValueError("depth must be non-negative")
        if not self.delta_afc > 0:
            raise ValueError("delta_afc must be positive")

    @property
    def upsilon(self) -> float:
        return self.delta_afc / self.finesse

    @property
    def afc_depth(self) -> float:
        """Comb-averaged resonant depth α_{R,afc}(0)L = α_R(0)L / f."""
        return self.depth / self.finesse

    @property
    def gamma(self) -> float:
        return afc_dephasing(self.finesse)

    @property
    def storage_time(self) -> float:
        return 2.0 * math.pi / self.delta_afc


def afc_forward_transfer(omega, afc_depth, gamma_afc=1.0, delta_in: float = 1.0):
    """Γ_afc α_{R,afc}(ω)Z exp(-α_afc(ω)Z/2), α_afc = α_{R,afc}(ω)(1 + iω/Δ_in).

    The echo keeps the signal's time order, so the input is not reflected.
    """
    x = np.asarray(omega, dtype=float) / delta_in
    a = afc_depth / (1.0 + x * x)
    out = gamma_afc * a * np.exp(-a * (1.0 + 1j * x) / 2.0)
    return out if out.ndim else complex(out)


def afc_backward_transfer(omega, afc_depth, gamma_afc=1.0, delta_in: float = 1.0):
    """Γ_afc (α_R/α)(1 - exp(-α_afc(ω)L)); ``afc_depth=math.inf`` gives the deep limit."""
    x = np.asarray(omega, dtype=float) / delta_in
    if math.isinf(afc_depth):
        out = gamma_afc / (1.0 + 1j * x) + 0j * x
    else:
        a = afc_depth / (1.0 + x * x)
        out = gamma_afc / (1.0 + 1j * x) * -np.expm1(-a * (1.0 + 1j * x))
    return out if np.ndim(out) else complex(out)


# ---------------------------------------------------------------- dispersion

@dataclass(frozen=True, eq=False)
class DispersionDecomposition:
    omega: np.ndarray
    chi0: np.ndarray
    chi1: np.ndarray
    chi2: np.ndarray
    zeta: float = ZETA

    @property
    def total(self):
        return self.chi0 + self.chi1 + self.chi2


def _require_gaussian(comb):
    if comb.host.shape is not LineShape.GAUSSIAN:
        raise ValueError("comb dispersion needs a Gaussian host line")


def chi_comb(omega, comb: AfcComb):
    """Comb term (1/f)[scaled_erfi(√ζ ω) - i exp(-ζ ω²)]."""
    _require_gaussian(comb)
    x = np.asarray(omega, dtype=float) / comb.host.delta_in
    out = (scaled_erfi(math.sqrt(ZETA) * x) - 1j * np.exp(-ZETA * x * x)) / comb.finesse
    return out if np.ndim(out) else complex(out)


# relative distance from the window edge below which ω counts as on the edge
EDGE_RTOL = 1e-9


def in_window(omega, comb) -> np.ndarray:
    """True where ω lies strictly inside the transparency window (away from the edge singularity)."""
    half = comb.delta0 / (2.0 * comb.host.delta_in)
    return np.abs(np.asarray(omega, dtype=float) / comb.host.delta_in) < half * (1.0 - EDGE_RTOL)


def _wing_integrals(x, half, tol):
    """Unit-weight wing dispersion (1/π)∫ e^{-ζy²}/(x - y) dy over y ≤ -half and y ≥ half."""
    x = np.atleast_1d(np.asarray(x, dtype=float))

    def left(y):
        return np.exp(-ZETA * y * y) / (x[:, None] - y) / math.pi

    def right(y):
        return np.exp(-ZETA * y * y) / (x[:, None] - y) / math.pi

    # the integrand peaks like 1/(half - |x|) at the window edge; refine geometrically towards it
    gap = max(float(half - np.max(np.abs(x))), 1e-12)
    offsets = [3.0, 1.0, 0.1]
    while offsets[-1] > 10.0 * gap:
        offsets.append(offsets[-1] / 10.0)
    pts = tuple(sorted(half + o for o in offsets))
    lo = adaptive_quadrature(left, -math.inf, -half, tol, breakpoints=tuple(-p for p in pts))
    hi = adaptive_quadrature(right, half, math.inf, tol, breakpoints=pts)
    return lo.value, hi.value, max(lo.error_estimate, hi.error_estimate)


@lru_cache(maxsize=256)
def _unit_wings_cached(x_key: tuple, half: float, tol: float):
    l, r, _ = _wing_integrals(np.array(x_key), half, tol)
    return l, r


def chi_wings(omega, comb: AfcComb, tol: float = 1e-11):
    """Real wing terms (χ'₁, χ'₂) from the host absorption outside the window.

    Both are (1 - 1/f)/π ∫ e^{-ζx²}/(ω/Δ_in - x) dx, over x ≤ -Δ₀/2Δ_in and
    x ≥ Δ₀/2Δ_in respectively, and are computed separately.
    """
    _require_gaussian(comb)
    w = np.asarray(omega, dtype=float)
    x = w / comb.host.delta_in
    half = comb.delta0 / (2.0 * comb.host.delta_in)
    if np.any(np.abs(x) >= half * (1.0 - EDGE_RTOL)):
        raise ValueError("chi_wings is only defined strictly inside the comb window |ω| < Δ₀/2")
    if math.isinf(half):
        zero = np.zeros_like(x)
        return (zero, zero) if w.ndim else (0.0, 0.0)
    l, r = _unit_wings_cached(tuple(np.atleast_1d(x).tolist()), float(half), float(tol))
    scale = 1.0 - 1.0 / comb.finesse
    l, r = scale * l, scale * r
    if w.ndim:
        return l.reshape(w.shape), r.reshape(w.shape)
    return float(l[0]), float(r[0])


def decompose(omega, comb: AfcComb) -> DispersionDecomposition:
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    c1, c2 = chi_wings(w, comb)
    return DispersionDecomposition(w, np.atleast_1d(chi_comb(w, comb)), c1, c2)


def chi_total(omega, comb: AfcComb):
    """χ̂(ω) = χ₀ + χ'₁ + χ'₂ inside the comb window."""
    c1, c2 = chi_wings(omega, comb)
    out = chi_comb(omega, comb) + c1 + c2
    return out if np.ndim(out) else complex(out)


def afc_dispersion_transfer(omega, comb: AfcComb, chi=None):
    """Γ_afc·D(ω) with D = (1 - exp(-i d χ̂)) / (1 - i χ̂'/χ̂'').

    The exponent sign is chosen so the field decays through the absorbing
    comb (χ̂'' < 0); |D| does not depend on that choice.  ``chi`` may be
    passed to reuse a precomputed χ̂ on the same grid.
    """
    chi = chi_total(omega, comb) if chi is None else chi
    chi = np.asarray(chi, dtype=complex)
    if np.any(chi.imag >= 0):
        raise SingularPointError("χ'' must be strictly negative where D is evaluated")
    d = -np.expm1(-1j * comb.depth * chi) / (1.0 - 1j * chi.real / chi.imag)
    out = comb.gamma * d
    return out if out.ndim else complex(out)


def afc_efficiency(omega, comb: AfcComb, chi=None):
    return np.abs(afc_dispersion_transfer(omega, comb, chi)) ** 2


def plateau_halfwidth(omega, chi_prime, chi_pp0, fraction: float = PLATEAU_FRACTION) -> float:
    """Largest b on the grid with |χ'(ω)| < fraction·|χ''(0)| for all |ω| ≤ b."""
    omega = np.asarray(omega, dtype=float)
    ok = np.abs(chi_prime) < fraction * abs(chi_pp0)
    order = np.argsort(np.abs(omega), kind="stable")
    b = 0.0
    for i in order:
        if not ok[i]:
            break
        b = abs(omega[i])
    return float(b)


# ---------------------------------------------------------------- design search

@dataclass(frozen=True)
class AfcDesign:
    comb: AfcComb
    worst_efficiency: float
    mean_efficiency: float
    plateau: float
    feasible: bool
    evaluations: int
    target_bandwidth: float

    def as_record(self) -> dict:
        return {
            "finesse": float(self.comb.finesse),
            "delta0": float(self.comb.delta0),
            "depth": float(self.comb.depth),
            "gamma_afc": self.comb.gamma,
            "worst_efficiency": self.worst_efficiency,
            "mean_efficiency": self.mean_efficiency,
            "plateau_halfwidth": self.plateau,
            "feasible": self.feasible,
            "evaluations": self.evaluations,
            "target_bandwidth": self.target_bandwidth,
        }


def _band(target_bandwidth, n):
    # η is even in ω, so the non-negative half of the band is enough
    return np.linspace(0.0, target_bandwidth / 2.0, n)


def _score(f, delta0, depth, band, host):
    if delta0 / 2.0 <= band[-1] * host.delta_in:
        return -math.inf, -math.inf
    comb = AfcComb(finesse=f, depth=depth, delta0=delta0, host=host)
    eta = afc_efficiency(band * host.delta_in, comb)
    return float(eta.min()), float(eta.mean())


def _axis(lo, hi, n):
    return np.array([lo]) if lo == hi else np.linspace(lo, hi, n)


def afc_design_search(target_bandwidth: float, finesse_range, delta0_range, depth_range, *,
                      threshold: float | None = None, n_grid: int = 9, n_band: int = 46,
                      rounds: int = 6, shrink: float = 0.25,
                      host: InhomogeneousLine = InhomogeneousLine(LineShape.GAUSSIAN)) -> AfcDesign:
    """Maximise the worst-case efficiency over |ω| ≤ Δ_QM/2.

    A coarse grid over (Δ₀, f, d) is refined by repeatedly zooming onto the
    best cell.  Ties are broken by the smallest Δ₀, then f, then d, so the
    result does not depend on evaluation order.  ``feasible`` is False when
    no candidate reaches ``threshold``.
    """
    if not target_bandwidth > 0:
        raise ValueError("target bandwidth must be positive")
    ranges = [tuple(map(float, r)) for r in (delta0_range, finesse_range, depth_range)]
    for lo, hi in ranges:
        if not lo <= hi:
            raise ValueError("each range must satisfy lo <= hi")
    band = _band(target_bandwidth, n_band)
    seen: dict = {}

    def evaluate(key):
        if key not in seen:
            delta0, f, d = key
            seen[key] = _score(f, delta0, d, band, host)
        return seen[key]

    cur = list(ranges)
    best = None
    for _ in range(rounds):
        axes = [_axis(lo, hi, n_grid) for lo, hi in cur]
        keys = [(a, b, c) for a in axes[0] for b in axes[1] for c in axes[2]]
        for key in keys:
            s = evaluate(key)
            cand = (-s[0], key)
            if best is None or cand < best:
                best = cand
        if all(lo == hi for lo, hi in cur):
            break
        key = best[1]
        new = []
        for (lo, hi), (glo, ghi), centre in zip(cur, ranges, key):
            half = (hi - lo) * shrink
            new.append((max(glo, centre - half), min(ghi, centre + half)))
        cur = new
    delta0, f, d = best[1]
    worst, mean = evaluate(best[1])
    if not math.isfinite(worst):
        raise ValueError("no candidate window contains the target band")
    comb = AfcComb(finesse=f, depth=d, delta0=delta0, host=host)
    grid = np.linspace(-min(delta0 / 2.0, 1.0) * 0.999, min(delta0 / 2.0, 1.0) * 0.999, 201) * host.delta_in
    chi = chi_total(grid, comb)
    plateau = plateau_halfwidth(grid, chi.real, float(np.imag(chi_comb(0.0, comb)) + 0.0))
    feasible = threshold is None or worst >= threshold
    return AfcDesign(comb, worst, mean, plateau, feasible, len(seen), target_bandwidth)


def afc_efficiency_map(delta0_grid, omega_grid, finesse: float, depth: float,
                       host: InhomogeneousLine = InhomogeneousLine(LineShape.GAUSSIAN)):
    """η(Δ₀, ω); cells outside the comb window are NaN."""
    return _map(delta0_grid, omega_grid, finesse, depth, host, lambda w, c, chi: afc_efficiency(w, c, chi))


def afc_dispersion_map(delta0_grid, omega_grid, finesse: float,
                       host: InhomogeneousLine = InhomogeneousLine(LineShape.GAUSSIAN)):
    """χ̂'(Δ₀, ω); cells outside the comb window are NaN."""
    return _map(delta0_grid, omega_grid, finesse, 0.0, host, lambda w, c, chi: chi.real)


def _map(delta0_grid, omega_grid, finesse, depth, host, fn):
    delta0_grid = np.asarray(delta0_grid, dtype=float)
    omega_grid = np.asarray(omega_grid, dtype=float)
    out = np.full((delta0_grid.size, omega_grid.size), np.nan)
    for i, d0 in enumerate(delta0_grid):
        comb = AfcComb(finesse=finesse, depth=depth, delta0=d0, host=host)
        # χ' diverges logarithmically at the window edge; cells within rounding of it are dropped
        inside = in_window(omega_grid, comb)
        if inside.any():
            w = omega_grid[inside]
            out[i, inside] = fn(w, comb, chi_total(w, comb))
    return out
