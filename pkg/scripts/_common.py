"""Shared output helpers for the figure scripts."""

import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

import echomem  # noqa: E402


def out_dir(sub: str) -> Path:
    d = Path(os.environ.get("ECHOMEM_OUT", "out")) / sub
    d.mkdir(parents=True, exist_ok=True)
    return d


def save_matrix(path: Path, rows, cols, values, row_name, col_name, value_name):
    """Long-format CSV, rows outer and columns inner."""
    r, c = np.meshgrid(rows, cols, indexing="ij")
    data = np.column_stack([r.ravel(), c.ravel(), np.asarray(values).ravel()])
    np.savetxt(path, data, delimiter=",", fmt="%.16e", comments="",
               header=f"# echomem {echomem.__version__}\n{row_name},{col_name},{value_name}")


def save_columns(path: Path, names, *columns):
    np.savetxt(path, np.column_stack(columns), delimiter=",", fmt="%.16e", comments="",
               header=f"# echomem {echomem.__version__}\n" + ",".join(names))


def heatmap(path: Path, x, y, z, xlabel, ylabel, label, levels=None):
    fig, ax = plt.subplots(figsize=(5.5, 4))
    m = ax.pcolormesh(x, y, z, shading="nearest", cmap="viridis")
    if levels is not None:
        ax.contour(x, y, z, levels=levels, colors="w", linewidths=0.6)
    fig.colorbar(m, ax=ax, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def lines(path: Path, x, series: dict, xlabel, ylabel):
    fig, ax = plt.subplots(figsize=(5.5, 4))
    for name, y in series.items():
        ax.plot(x, y, label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
