"""Forward CRIB echo of a narrow and a broad Gaussian input, and a backward reference."""

import numpy as np

from _common import lines, out_dir, save_columns
from echomem import TransferFunction, apply_transfer, crib_backward_transfer, crib_forward_transfer
from echomem.pulses import energy_efficiency, gaussian_pulse, rms_duration, spectral_width_hwem


def run(width, depth=2.0, forward=True):
    p = gaussian_pulse(1.0 / width, n=8193, span=200.0)
    fn = crib_forward_transfer if forward else crib_backward_transfer
    echo = apply_transfer(p, TransferFunction(p.omega, fn(p.omega, depth), True), strict=True)
    return p, echo


def main():
    out = out_dir("echo_broadening")
    curves = {}
    for width in (0.7, 1.5):
        p, e = run(width)
        eff = energy_efficiency(p, e)
        r_in, r_out = rms_duration(p), rms_duration(e)
        print(f"input HWe-1M {spectral_width_hwem(p):.3f}: efficiency {eff:.4f}, "
              f"rms {r_in:.3f} -> {r_out:.3f} (x{r_out / r_in:.3f})")
        save_columns(out / f"forward_width_{width}.csv", ["t", "abs_input", "abs_echo"],
                     p.t, np.abs(p.envelope), np.abs(e.envelope))
        curves[f"input {width}"] = np.abs(p.envelope)
        curves[f"echo {width}"] = np.abs(e.envelope)
    keep = np.abs(p.t) < 8
    lines(out / "forward_echoes.png", p.t[keep], {k: v[keep] for k, v in curves.items()}, "t Δ_in", "|a|")

    p, e = run(0.7, depth=10.0, forward=False)
    print(f"backward, αL = 10: efficiency {energy_efficiency(p, e):.6f}")


if __name__ == "__main__":
    main()
