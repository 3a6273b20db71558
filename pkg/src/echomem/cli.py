"""``echomem`` command line: transfer curves, 2-D maps, echo simulation, AFC design, verification.

Every data command reads one JSON config.  Outputs go to ``--out``, else
$ECHOMEM_OUT, else the config's ``output.dir``, else ``./out``.  CSV files
start with ``#`` comment lines holding the package version, the config
SHA-256 and the canonical config itself, so any file can be regenerated
from its header.  Exit codes: 0 ok, 2 invalid input, 3 infeasible design,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import afc, area, linear, pulses
from .lineshape import InhomogeneousLine, LineShape
from .oracle import QuadratureError

EXIT_OK, EXIT_VALIDATION, EXIT_INFEASIBLE, EXIT_NUMERICAL = 0, 2, 3, 4
DEFAULT_MAX_CELLS = 1_000_000

PROTOCOLS = ("crib-fwd", "crib-bwd", "gem", "afc-fwd", "afc-bwd", "afc-dispersion", "rose", "crib-area")

# parameter defaults per protocol; anything not listed is rejected
DEFAULTS = {
    "crib-fwd": {"depth": 2.0, "gamma_e": 1.0, "line": "lorentzian", "optimum_omega": [0.0, 0.5, 1.0]},
    "crib-bwd": {"depth": 2.0, "gamma_e": 1.0, "line": "lorentzian"},
    "gem": {"kappa_eff": 1.0, "gamma_e": 1.0, "geometry": "forward", "chi_grad": 10.0, "t1": None},
    "afc-fwd": {"afc_depth": 2.0, "finesse": None, "gamma_e": 1.0},
    "afc-bwd": {"afc_depth": "inf", "finesse": None, "gamma_e": 1.0},
    "afc-dispersion": {"finesse": 10.0, "depth": 80.0, "delta0": 1.25, "quantity": "eta",
                       "target_bandwidth": 0.9, "finesse_range": None, "delta0_range": [1.0, 2.0],
                       "depth_range": None, "threshold": None},
    "rose": {"gamma_e": 1.0, "theta_s0": None},
    "crib-area": {"gamma_e": 1.0, "geometry": "backward", "measure": "theta"},
}
PULSE_DEFAULTS = {"spectral_width": 0.7, "samples": 4097, "span": 200.0}
GRID_DEFAULTS = {
    "omega_over_Din": {"start": -3.0, "stop": 3.0, "num": 121},
    "alphaL": {"start": 0.0, "stop": 10.0, "num": 51},
    "theta_s_over_pi": {"start": 0.02, "stop": 0.98, "num": 49},
    "theta_c_over_pi": {"start": 0.5, "stop": 1.0, "num": 51},
    "delta0_over_Din": {"start": 0.8, "stop": 2.0, "num": 25},
}
MAP_AXES = {
    "crib-fwd": ("alphaL", "omega_over_Din", "eta"),
    "crib-bwd": ("alphaL", "omega_over_Din", "eta"),
    "afc-fwd": ("alphaL", "omega_over_Din", "eta"),
    "afc-bwd": ("alphaL", "omega_over_Din", "eta"),
    "afc-dispersion": ("delta0_over_Din", "omega_over_Din", None),
    "crib-area": ("theta_s_over_pi", "alphaL", "eta"),
    "rose": ("theta_c_over_pi", "alphaL", "eta_theta"),
}


class ConfigError(ValueError):
    pass


class InfeasibleError(RuntimeError):
    pass


# ---------------------------------------------------------------- config

@dataclass
class RunConfig:
    protocol: str
    params: dict
    grids: dict
    pulse: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @property
    def canonical(self) -> str:
        """Resolved config (defaults filled in, output directory left out) as compact JSON."""
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))

    @property
    def sha256(self) -> str:
        return hashlib.sha256(self.canonical.encode("utf-8")).hexdigest()

    def grid(self, name):
        return self.grids[name]


def _number(path, v, *, allow_inf=False):
    if isinstance(v, str) and allow_inf and v.lower() in ("inf", "infinity"):
        return math.inf
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v) and not allow_inf:
        raise ConfigError(f"{path}: must be finite")
    return v


def _parse_grid(name, spec):
    path = f"grids.{name}"
    if isinstance(spec, list):
        spec = {"values": spec}
    if not isinstance(spec, dict):
        raise ConfigError(f"{path}: expected an object with start/stop/num or values")
    extra = set(spec) - {"start", "stop", "num", "values"}
    if extra:
        raise ConfigError(f"{path}: unknown key(s) {sorted(extra)}")
    if "values" in spec:
        vals = np.array([_number(f"{path}.values[{i}]", v) for i, v in enumerate(spec["values"])])
    else:
        try:
            start, stop, num = spec["start"], spec["stop"], spec["num"]
        except KeyError as exc:
            raise ConfigError(f"{path}: missing {exc.args[0]!r}") from None
        if isinstance(num, bool) or not isinstance(num, int) or num < 0:
            raise ConfigError(f"{path}.num: expected a non-negative integer")
        vals = np.linspace(_number(f"{path}.start", start), _number(f"{path}.stop", stop), num)
    if vals.size == 0:
        raise ConfigError(f"{path}: grid is empty")
    if vals.size > 1 and np.any(np.diff(vals) <= 0):
        raise ConfigError(f"{path}: grid must be strictly increasing")
    return vals


def _check_params(protocol, params):
    p = params
    num = lambda k, **kw: _number(f"params.{k}", p[k], **kw)
    for k in ("depth", "afc_depth", "kappa_eff"):
        if k in p and p[k] is not None and num(k, allow_inf=(k == "afc_depth")) < 0:
            raise ConfigError(f"params.{k}: must be non-negative")
    if "gamma_e" in p and not 0.0 <= num("gamma_e") <= 1.0:
        raise ConfigError("params.gamma_e: must lie in [0, 1]")
    if p.get("finesse") is not None and not num("finesse") > 1.0:
        raise ConfigError("params.finesse: must exceed 1")
    if "line" in p and p["line"] not in ("lorentzian", "gaussian"):
        raise ConfigError("params.line: expected 'lorentzian' or 'gaussian'")
    if "geometry" in p and p["geometry"] not in ("forward", "backward"):
        raise ConfigError("params.geometry: expected 'forward' or 'backward'")
    if "quantity" in p and p["quantity"] not in ("eta", "chi_prime"):
        raise ConfigError("params.quantity: expected 'eta' or 'chi_prime'")
    if "measure" in p and p["measure"] not in ("theta", "tan"):
        raise ConfigError("params.measure: expected 'theta' or 'tan'")
    if "delta0" in p and not num("delta0", allow_inf=True) > 0:
        raise ConfigError("params.delta0: must be positive")
    if p.get("theta_s0") is not None and not 0 < num("theta_s0") < math.pi:
        raise ConfigError("params.theta_s0: must lie in (0, π)")
    for k in ("finesse_range", "delta0_range", "depth_range"):
        if p.get(k) is not None:
            r = p[k]
            if not (isinstance(r, list) and len(r) == 2):
                raise ConfigError(f"params.{k}: expected [lo, hi]")
            lo, hi = (_number(f"params.{k}[{i}]", v) for i, v in enumerate(r))
            if lo > hi:
                raise ConfigError(f"params.{k}: lo must not exceed hi")


def load_config(source, protocol_override=None) -> RunConfig:
    """Parse and validate a config given as a path, JSON text or dict."""
    if isinstance(source, dict):
        raw = source
    else:
        text = Path(source).read_text(encoding="utf-8") if source is not None else "{}"
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be an object")
    extra = set(raw) - {"protocol", "params", "grids", "pulse", "output"}
    if extra:
        raise ConfigError(f"config: unknown key(s) {sorted(extra)}")
    raw = json.loads(json.dumps(raw))
    if protocol_override:
        raw["protocol"] = protocol_override
    protocol = raw.get("protocol")
    if protocol not in PROTOCOLS:
        raise ConfigError(f"protocol: expected one of {', '.join(PROTOCOLS)}, got {protocol!r}")
    given = raw.get("params", {})
    if not isinstance(given, dict):
        raise ConfigError("params: expected an object")
    unknown = set(given) - set(DEFAULTS[protocol])
    if unknown:
        raise ConfigError(f"params: unknown key(s) {sorted(unknown)} for protocol {protocol}")
    params = {**DEFAULTS[protocol], **given}
    _check_params(protocol, params)
    grids_raw = raw.get("grids", {})
    if not isinstance(grids_raw, dict):
        raise ConfigError("grids: expected an object")
    unknown = set(grids_raw) - set(GRID_DEFAULTS)
    if unknown:
        raise ConfigError(f"grids: unknown axis name(s) {sorted(unknown)}")
    grids = {k: _parse_grid(k, grids_raw.get(k, v)) for k, v in GRID_DEFAULTS.items()}
    pulse = {**PULSE_DEFAULTS, **raw.get("pulse", {})}
    unknown = set(pulse) - set(PULSE_DEFAULTS)
    if unknown:
        raise ConfigError(f"pulse: unknown key(s) {sorted(unknown)}")
    if not _number("pulse.spectral_width", pulse["spectral_width"]) > 0:
        raise ConfigError("pulse.spectral_width: must be positive")
    if not (isinstance(pulse["samples"], int) and pulse["samples"] >= 16):
        raise ConfigError("pulse.samples: expected an integer >= 16")
    output = raw.get("output", {})
    if not isinstance(output, dict) or set(output) - {"dir", "max_cells"}:
        raise ConfigError("output: expected an object with optional 'dir' and 'max_cells'")
    resolved = {
        "protocol": protocol,
        "params": params,
        "grids": {k: (grids_raw[k] if k in grids_raw else v) for k, v in GRID_DEFAULTS.items()},
        "pulse": pulse,
        "output": {"max_cells": int(output.get("max_cells", DEFAULT_MAX_CELLS))},
    }
    return RunConfig(protocol, params, grids, pulse, output, resolved)


def output_dir(cli_out, cfg: RunConfig | None) -> Path:
    if cli_out:
        d = Path(cli_out)
    elif os.environ.get("ECHOMEM_OUT"):
        d = Path(os.environ["ECHOMEM_OUT"])
    elif cfg is not None and cfg.output.get("dir"):
        d = Path(cfg.output["dir"])
    else:
        d = Path("out")
    d.mkdir(parents=True, exist_ok=True)
    return d


# ---------------------------------------------------------------- writers

def _fmt(v) -> str:
    return f"{float(v):.16e}"


def _header(cfg: RunConfig, kind: str) -> list[str]:
    return [f"echomem {__version__} {kind}", f"config_sha256 {cfg.sha256}", f"config {cfg.canonical}"]


def write_csv(path: Path, cfg: RunConfig, kind: str, columns, rows):
    buf = io.StringIO()
    for line in _header(cfg, kind):
        buf.write(f"# {line}\n")
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    path.write_text(buf.getvalue(), encoding="utf-8")


def write_json(path: Path, cfg: RunConfig, kind: str, payload: dict):
    doc = {"echomem": __version__, "kind": kind, "config_sha256": cfg.sha256, "config": cfg.raw, **payload}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True, default=float) + "\n", encoding="utf-8")


def _svg(path: Path, draw):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    draw(fig, ax)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# ---------------------------------------------------------------- physics dispatch

def _line(params):
    return InhomogeneousLine(LineShape(params.get("line", "lorentzian")))


def _afc_gamma(params):
    f = params.get("finesse")
    return afc.afc_dephasing(f) if f is not None else float(params["gamma_e"])


def _afc_depth(params):
    return _number("params.afc_depth", params["afc_depth"], allow_inf=True)


def _gaussian_comb(params, delta0=None):
    return afc.AfcComb(finesse=float(params["finesse"]), depth=float(params["depth"]),
                       delta0=float(params["delta0"] if delta0 is None else delta0),
                       host=InhomogeneousLine(LineShape.GAUSSIAN))


def transfer_values(protocol, params, omega, depth=None):
    """Complex transfer on ``omega``; ``depth`` overrides the configured depth."""
    if protocol == "crib-fwd":
        d = params["depth"] if depth is None else depth
        return linear.crib_forward_transfer(omega, d, params["gamma_e"], _line(params))
    if protocol == "crib-bwd":
        d = params["depth"] if depth is None else depth
        return linear.crib_backward_transfer(omega, d, params["gamma_e"], _line(params)) + 0j
    if protocol == "gem":
        return np.full(omega.shape, linear.gem_transfer(params["kappa_eff"], params["gamma_e"],
                                                        params["geometry"]), dtype=complex)
    if protocol == "afc-fwd":
        d = _afc_depth(params) if depth is None else depth
        return afc.afc_forward_transfer(omega, d, _afc_gamma(params))
    if protocol == "afc-bwd":
        d = _afc_depth(params) if depth is None else depth
        return afc.afc_backward_transfer(omega, d, _afc_gamma(params))
    if protocol == "afc-dispersion":
        comb = _gaussian_comb(params)
        inside = afc.in_window(omega, comb)
        if not inside.all():
            raise ConfigError("grids.omega_over_Din: afc-dispersion needs |ω| < Δ₀/2")
        return afc.afc_dispersion_transfer(omega, comb)
    raise ConfigError(f"protocol {protocol} has no frequency response")


def _map_row(args):
    """One row of a 2-D map; module-level so worker processes can run it."""
    protocol, params, row_value, cols = args
    if protocol in ("crib-fwd", "crib-bwd", "afc-fwd", "afc-bwd"):
        return np.abs(transfer_values(protocol, params, cols, depth=row_value)) ** 2
    if protocol == "afc-dispersion":
        comb = _gaussian_comb(params, delta0=row_value)
        out = np.full(cols.shape, np.nan)
        inside = afc.in_window(cols, comb)
        if inside.any():
            w = cols[inside]
            chi = afc.chi_total(w, comb)
            out[inside] = chi.real if params["quantity"] == "chi_prime" else afc.afc_efficiency(w, comb, chi)
        return out
    if protocol == "crib-area":
        return area.crib_area_map([row_value * math.pi], cols, params["geometry"], params["gamma_e"],
                                  params["measure"])[0]
    if protocol == "rose":
        return area.rose_gain_map([row_value * math.pi], cols, params["gamma_e"], params["theta_s0"])[0]
    raise ConfigError(f"protocol {protocol} has no 2-D map")


def compute_map(cfg: RunConfig, jobs: int = 1):
    if cfg.protocol not in MAP_AXES:
        raise ConfigError(f"protocol {cfg.protocol} has no 2-D map")
    row_name, col_name, _ = MAP_AXES[cfg.protocol]
    rows, cols = cfg.grid(row_name), cfg.grid(col_name)
    cap = int(cfg.output.get("max_cells", DEFAULT_MAX_CELLS))
    if rows.size * cols.size > cap:
        raise ConfigError(f"map has {rows.size * cols.size} cells, above the cap of {cap}; "
                          f"coarsen the grids or raise output.max_cells")
    tasks = [(cfg.protocol, cfg.params, float(r), cols) for r in rows]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_map_row, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        values = [_map_row(t) for t in tasks]
    return row_name, rows, col_name, cols, np.vstack(values)


# ---------------------------------------------------------------- commands

def cmd_respond(cfg: RunConfig, out: Path, svg: bool = False) -> dict:
    omega = cfg.grid("omega_over_Din")
    h = np.asarray(transfer_values(cfg.protocol, cfg.params, omega), dtype=complex)
    eta = np.abs(h) ** 2
    rows = zip(omega, h.real, h.imag, np.abs(h), np.angle(h), eta)
    path = out / f"respond_{cfg.protocol}.csv"
    write_csv(path, cfg, "respond", ["omega_over_Din", "re_H", "im_H", "abs_H", "phase_H", "eta"], rows)
    summary = {"file": str(path), "eta_max": float(eta.max()),
               "omega_at_max": float(omega[int(np.argmax(eta))])}
    if cfg.protocol == "crib-fwd":
        opts = []
        for w in cfg.params["optimum_omega"]:
            o = linear.crib_forward_optimal_depth(float(w), _line(cfg.params))
            opts.append({"omega_over_Din": o.omega, "alphaL_opt": o.depth, "local_alphaL_opt": o.local_depth,
                         "eta_max": o.efficiency, "stationarity": o.stationarity,
                         "quoted_local_alphaL": o.quoted_local_depth, "quoted_eta_max": o.quoted_efficiency})
        summary["optimum"] = opts
        write_json(out / "respond_crib-fwd_optimum.json", cfg, "optimum", {"optimum": opts})
    if svg:
        def draw(fig, ax):
            ax.plot(omega, eta, label="η")
            ax.plot(omega, np.abs(h), "--", label="|H|")
            ax.set_xlabel("ω/Δ_in")
            ax.legend()
        _svg(out / f"respond_{cfg.protocol}.svg", draw)
    return summary


def cmd_map(cfg: RunConfig, out: Path, jobs: int = 1, svg: bool = False) -> dict:
    row_name, rows, col_name, cols, values = compute_map(cfg, jobs)
    value_name = MAP_AXES[cfg.protocol][2] or cfg.params["quantity"]
    path = out / f"map_{cfg.protocol}.csv"
    cells = ((r, c, values[i, j]) for i, r in enumerate(rows) for j, c in enumerate(cols))
    write_csv(path, cfg, "map", [row_name, col_name, value_name], cells)
    finite = np.where(np.isfinite(values), values, -np.inf)
    i, j = np.unravel_index(int(np.argmax(finite)), values.shape)
    if svg:
        def draw(fig, ax):
            m = ax.pcolormesh(cols, rows, values, shading="nearest")
            fig.colorbar(m, ax=ax, label=value_name)
            ax.set_xlabel(col_name)
            ax.set_ylabel(row_name)
        _svg(out / f"map_{cfg.protocol}.svg", draw)
    return {"file": str(path), "shape": list(values.shape), "peak": float(values[i, j]),
            "peak_at": {row_name: float(rows[i]), col_name: float(cols[j])}}


def cmd_echo(cfg: RunConfig, out: Path, strict: bool = False, svg: bool = False) -> dict:
    width = float(cfg.pulse["spectral_width"])
    pulse = pulses.gaussian_pulse(1.0 / width, n=int(cfg.pulse["samples"]), span=float(cfg.pulse["span"]))
    with warnings.catch_warnings():
        warnings.simplefilter("error" if strict else "default", linear.AliasingWarning)
        if cfg.protocol == "gem":
            t1 = cfg.params["t1"]
            duration = 1.0 / width
            if t1 is None:
                t1 = 10.0 * duration * math.sqrt(max(cfg.params["kappa_eff"], 1e-12) / math.pi)
            gem = linear.GemConfig(cfg.params["kappa_eff"], cfg.params["chi_grad"], float(t1))
            echo = linear.gem_echo(pulse, gem, cfg.params["gamma_e"], cfg.params["geometry"])
        else:
            reflect = cfg.protocol in ("crib-fwd", "crib-bwd")
            h = transfer_values(cfg.protocol, cfg.params, pulse.omega)
            try:
                echo = linear.apply_transfer(pulse, linear.TransferFunction(pulse.omega, h, reflect), strict=strict)
            except linear.AliasingWarning as w:
                raise linear.AliasingError(str(w)) from None
    pulses.write_pulse_csv(pulse, out / f"echo_{cfg.protocol}_input.csv", _header(cfg, "input"))
    pulses.write_pulse_csv(echo, out / f"echo_{cfg.protocol}_output.csv", _header(cfg, "echo"))
    summary = {
        "input_spectral_width": pulses.spectral_width_hwem(pulse),
        "input_rms_duration": pulses.rms_duration(pulse),
        "echo_rms_duration": pulses.rms_duration(echo),
        "energy_efficiency": pulses.energy_efficiency(pulse, echo),
    }
    write_json(out / f"echo_{cfg.protocol}.json", cfg, "echo", summary)
    if svg:
        def draw(fig, ax):
            ax.plot(pulse.t, np.abs(pulse.envelope), label="input")
            ax.plot(echo.t, np.abs(echo.envelope), label="echo")
            ax.set_xlabel("t Δ_in")
            ax.legend()
        _svg(out / f"echo_{cfg.protocol}.svg", draw)
    return summary


def cmd_afc_design(cfg: RunConfig, out: Path, svg: bool = False) -> dict:
    if cfg.protocol != "afc-dispersion":
        raise ConfigError("afc-design needs protocol 'afc-dispersion'")
    p = cfg.params
    f_range = p["finesse_range"] or [p["finesse"], p["finesse"]]
    d_range = p["depth_range"] or [p["depth"], p["depth"]]
    design = afc.afc_design_search(float(p["target_bandwidth"]), f_range, p["delta0_range"], d_range,
                                   threshold=p["threshold"])
    comb = design.comb
    half = comb.delta0 / 2.0
    omega = np.linspace(-half, half, 203)[1:-1]
    chi = afc.chi_total(omega, comb)
    eta = afc.afc_efficiency(omega, comb, chi)
    write_csv(out / "afc_design_curves.csv", cfg, "afc-design",
              ["omega_over_Din", "chi_prime", "chi_double_prime", "eta"], zip(omega, chi.real, chi.imag, eta))
    report = design.as_record()
    write_json(out / "afc_design.json", cfg, "afc-design", {"design": report})
    if svg:
        def draw(fig, ax):
            ax.plot(omega, eta, label="η")
            ax.plot(omega, chi.real, label="χ'")
            ax.axvspan(-design.target_bandwidth / 2, design.target_bandwidth / 2, alpha=0.15)
            ax.set_xlabel("ω/Δ_in")
            ax.legend()
        _svg(out / "afc_design.svg", draw)
    if not design.feasible:
        raise InfeasibleError(f"no design meets threshold {p['threshold']}: best worst-case η = "
                              f"{design.worst_efficiency:.4f} at Δ₀ = {comb.delta0:.4f}")
    return report


def cmd_verify(groups=None) -> tuple[bool, str]:
    from .verify import format_report, run_checks

    results = run_checks(groups)
    return all(r.passed for r in results), format_report(results)


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="echomem", description="Photon-echo quantum memory calculations.")
    ap.add_argument("--version", action="version", version=f"echomem {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, jobs=False):
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--protocol", choices=PROTOCOLS, help="override the config protocol")
        p.add_argument("--out", help="output directory (overrides $ECHOMEM_OUT)")
        p.add_argument("--svg", action="store_true", help="also write SVG plots")
        p.add_argument("--strict", action="store_true", help="turn aliasing warnings into errors")
        if jobs:
            p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    common(sub.add_parser("respond", help="transfer function and spectral efficiency curves"))
    common(sub.add_parser("map", help="2-D efficiency maps"), jobs=True)
    common(sub.add_parser("echo", help="store and retrieve a Gaussian pulse"))
    common(sub.add_parser("afc-design", help="search the AFC window width for a target band"))
    v = sub.add_parser("verify", help="run the oracle-vs-closed-form checks")
    v.add_argument("--only", help="comma-separated check groups")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            groups = [g.strip() for g in args.only.split(",")] if args.only else None
            ok, report = cmd_verify(groups)
            print(report)
            return EXIT_OK if ok else EXIT_NUMERICAL
        cfg = load_config(args.config, args.protocol)
        out = output_dir(args.out, cfg)
        if args.command == "respond":
            summary = cmd_respond(cfg, out, args.svg)
        elif args.command == "map":
            if args.jobs < 1:
                raise ConfigError("--jobs must be at least 1")
            summary = cmd_map(cfg, out, args.jobs, args.svg)
        elif args.command == "echo":
            summary = cmd_echo(cfg, out, args.strict, args.svg)
        else:
            summary = cmd_afc_design(cfg, out, args.svg)
        print(json.dumps(summary, indent=2, sort_keys=True, default=float))
        return EXIT_OK
    except (ConfigError, OSError, area.BifurcationError) as exc:
        print(f"echomem: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleError as exc:
        print(f"echomem: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (QuadratureError, ArithmeticError, RuntimeError, linear.AliasingError) as exc:
        print(f"echomem: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"echomem: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
