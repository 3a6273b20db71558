"""Complex pulse envelopes on centred uniform time grids."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .oracle import _grid_step, time_grid, to_spectrum

__all__ = [
    "Pulse",
    "SpectrumAmbiguityError",
    "gaussian_pulse",
    "spectral_width_hwem",
    "time_reverse",
    "energy_efficiency",
    "rms_duration",
    "write_pulse_csv",
    "read_pulse_csv",
]


class SpectrumAmbiguityError(ValueError):
    """Raised when a width is requested for a spectrum with several lobes."""


@dataclass(frozen=True, eq=False)
class Pulse:
    t: np.ndarray
    envelope: np.ndarray
    carrier_detuning: float = 0.0
    _spectrum: tuple = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        env = np.asarray(self.envelope, dtype=complex)
        if env.shape != t.shape:
            raise ValueError("envelope and time grid differ in length")
        _grid_step(t)
        if not np.all(np.isfinite(env)):
            raise ValueError("envelope must be finite")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "envelope", env)

    @property
    def dt(self) -> float:
        return float(self.t[1] - self.t[0])

    def spectrum(self):
        """(omega, ã(ω)) in the package transform convention."""
        if self._spectrum is None:
            object.__setattr__(self, "_spectrum", to_spectrum(self.t, self.envelope))
        return self._spectrum

    @property
    def omega(self):
        return self.spectrum()[0]

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.envelope) ** 2) * self.dt)

    def with_envelope(self, envelope):
        return Pulse(self.t, envelope, self.carrier_detuning)


def gaussian_pulse(duration: float, amplitude: complex = 1.0, n: int = 2049, span: float | None = None,
                   t0: float = 0.0, carrier_detuning: float = 0.0) -> Pulse:
    """a(t) = A exp(-(t - t0)²/(2 δt²)); the energy spectrum then has HWe⁻¹M 1/δt.

    The grid has ``n`` points over ``span`` (default 40 δt) and must cover at
    least 8 δt.
    """
    if not duration > 0:
        raise ValueError("duration must be positive")
    span = 40.0 * duration if span is None else float(span)
    if span < 8.0 * duration:
        raise ValueError("time grid must span at least 8 pulse durations")
    t = time_grid(n, span / (n - 1))
    env = amplitude * np.exp(-((t - t0) ** 2) / (2.0 * duration ** 2))
    return Pulse(t, env, carrier_detuning)


def _crossing(x0, x1, y0, y1, level):
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def spectral_width_hwem(pulse: Pulse) -> float:
    """Half-width at e⁻¹ of the maximum of |ã(ω)|², by linear interpolation.

    When the spectrum is not centred the half-distance between the two
    crossings is returned.
    """
    w, s = pulse.spectrum()
    p = np.abs(s) ** 2
    level = p.max() / math.e
    above = p >= level
    idx = np.flatnonzero(above)
    if idx[-1] - idx[0] + 1 != idx.size:
        raise SpectrumAmbiguityError("energy spectrum has more than one lobe above e^-1")
    lo, hi = idx[0], idx[-1]
    if lo == 0 or hi == p.size - 1:
        raise SpectrumAmbiguityError("spectrum is not resolved inside the frequency grid")
    left = _crossing(w[lo - 1], w[lo], p[lo - 1], p[lo], level)
    right = _crossing(w[hi], w[hi + 1], p[hi], p[hi + 1], level)
    return 0.5 * (right - left)


def time_reverse(pulse: Pulse) -> Pulse:
    """Reverse the envelope about the grid centre: a(t) -> a(-t)."""
    return pulse.with_envelope(pulse.envelope[::-1])


def energy_efficiency(inp: Pulse, echo: Pulse) -> float:
    if inp.t.shape != echo.t.shape or not np.allclose(inp.t, echo.t, rtol=0, atol=1e-12 * abs(inp.dt)):
        raise ValueError("pulses must share a time grid")
    e_in = inp.energy
    if e_in == 0:
        raise ValueError("input pulse carries no energy")
    return echo.energy / e_in


def rms_duration(pulse: Pulse) -> float:
    """Root-mean-square width of |a(t)|² about its centroid."""
    p = np.abs(pulse.envelope) ** 2
    total = p.sum()
    if total == 0:
        return 0.0
    mean = np.sum(pulse.t * p) / total
    return float(np.sqrt(np.sum((pulse.t - mean) ** 2 * p) / total))


def write_pulse_csv(pulse: Pulse, path, header_lines=()):
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "re", "im"])
    for tk, ak in zip(pulse.t, pulse.envelope):
        w.writerow([f"{tk:.16e}", f"{ak.real:.16e}", f"{ak.imag:.16e}"])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def read_pulse_csv(path) -> Pulse:
    rows = [r for r in csv.reader(
        line for line in Path(path).read_text(encoding="utf-8").splitlines() if not line.startswith("#"))]
    if not rows or rows[0] != ["t", "re", "im"]:
        raise ValueError(f"{path}: expected header t,re,im")
    data = np.array(rows[1:], dtype=float)
    return Pulse(data[:, 0], data[:, 1] + 1j * data[:, 2])
