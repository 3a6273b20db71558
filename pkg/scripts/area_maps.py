"""Echo efficiency maps from the area theorem: CRIB over (θ_s, αL) and ROSE over (θ_c, α₀z)."""

import math

import numpy as np

from _common import heatmap, lines, out_dir, save_matrix
from echomem.area import Geometry, crib_area_map, rose_gain_map


def main():
    out = out_dir("area")
    ts = np.linspace(0.02, 0.98, 97) * math.pi
    depth = np.linspace(0.05, 10.0, 200)
    for geom in (Geometry.BACKWARD, Geometry.FORWARD):
        for measure in ("theta", "tan"):
            m = crib_area_map(ts, depth, geom, 1.0, measure)
            name = f"crib_{geom.value}_{measure}"
            save_matrix(out / f"{name}.csv", ts / math.pi, depth, m, "theta_s_over_pi", "alphaL", f"eta_{measure}")
            heatmap(out / f"{name}.png", depth, ts / math.pi, m, "α₀L", "θ_s(0)/π", f"η_{measure}")
            print(f"{name}: max {m.max():.4f}")

    tc = np.linspace(0.5, 1.0, 201) * math.pi
    x = np.linspace(0.0, 10.0, 201)
    g = rose_gain_map(tc, x)
    save_matrix(out / "rose_gain.csv", tc / math.pi, x, g, "theta_c_over_pi", "alphaL", "eta_theta")
    heatmap(out / "rose_gain.png", x, tc / math.pi, np.log10(np.maximum(g, 1e-6)), "α₀z", "θ_c/π",
            "log10 η_θ", levels=[0.0])
    at4 = rose_gain_map(tc, [4.0])[:, 0]
    print(f"ROSE: argmax θ_c at α₀z = 4 is {tc[np.argmax(at4)] / math.pi:.3f}π with η_θ = {at4.max():.3f}")
    lines(out / "rose_columns.png", x,
          {f"θ_c = {c:.2f}π": rose_gain_map([c * math.pi], x)[0] for c in (0.7, 0.8, 0.9, 1.0)}, "α₀z", "η_θ")


if __name__ == "__main__":
    main()
