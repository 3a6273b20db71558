"""AFC with a transparency window: χ' plateau, η over (Δ₀, ω), and the window-width search."""

import numpy as np

from _common import heatmap, lines, out_dir, save_columns, save_matrix
from echomem import AfcComb, InhomogeneousLine, LineShape, afc_design_search
from echomem.afc import afc_efficiency, afc_efficiency_map, chi_total

HOST = InhomogeneousLine(LineShape.GAUSSIAN)
F, DEPTH = 10.0, 80.0


def main():
    out = out_dir("afc")
    d0 = np.linspace(0.8, 2.0, 49)
    w = np.linspace(-1.0, 1.0, 201)
    eta = afc_efficiency_map(d0, w, F, DEPTH, HOST)
    save_matrix(out / "eta_delta0_omega.csv", d0, w, eta, "delta0_over_Din", "omega_over_Din", "eta")
    heatmap(out / "eta_delta0_omega.png", w, d0, eta, "ω/Δ_in", "Δ₀/Δ_in", "η", levels=[0.8, 0.9])

    curves = {}
    for delta0 in (1.0, 1.25, 1.5):
        comb = AfcComb(F, DEPTH, delta0, host=HOST)
        half = delta0 / 2
        x = np.linspace(-half, half, 401)[1:-1]
        chi = chi_total(x, comb)
        save_columns(out / f"chi_delta0_{delta0}.csv", ["omega_over_Din", "chi_prime", "chi_double_prime", "eta"],
                     x, chi.real, chi.imag, afc_efficiency(x, comb, chi))
        inner = np.abs(x) < 0.25
        print(f"Δ₀ = {delta0}: sup |χ'| over |ω| < 0.25 = {np.max(np.abs(chi.real[inner])):.4f}, "
              f"worst η over |ω| <= 0.45 = {afc_efficiency(np.linspace(0, 0.45, 91), comb).min():.4f}")
        grid = np.linspace(-0.45, 0.45, 181)
        curves[f"Δ₀ = {delta0}"] = afc_efficiency(grid, comb)
    lines(out / "eta_curves.png", grid, curves, "ω/Δ_in", "η")

    des = afc_design_search(0.9, (F, F), (1.0, 2.0), (DEPTH, DEPTH), threshold=0.87)
    print("design search:", {k: round(v, 4) if isinstance(v, float) else v for k, v in des.as_record().items()})


if __name__ == "__main__":
    main()
