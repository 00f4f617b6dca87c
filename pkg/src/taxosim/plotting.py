"""Static heatmaps of patient matrices and of the combo ranking.

Figures are written with fixed SVG metadata and hash salt so reruns produce
identical files.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bench import AlgorithmCombo  # noqa: E402
from .concept import CsMeasure  # noqa: E402
from .ic import IcMeasure  # noqa: E402
from .setsim import SetSimMeasure  # noqa: E402

STYLE = {
    "svg.hashsalt": "taxosim",
    "svg.fonttype": "none",
    "font.size": 8,
    "axes.titlesize": 9,
    "figure.dpi": 100,
}


def _save(fig, path) -> None:
    fmt = str(path).rsplit(".", 1)[-1].lower()
    metadata = {"Date": None} if fmt in ("svg", "pdf") else {}
    if fmt == "png":
        metadata = {"Software": None}
    fig.savefig(path, format=fmt, metadata=metadata, bbox_inches="tight")
    plt.close(fig)


def plot_matrix(values, path, labels: Sequence[str] | None = None, title: str | None = None,
                vmin: float | None = None, vmax: float | None = None) -> None:
    """Shaded n x n grid, one cell per patient pair."""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    with plt.rc_context(STYLE):
        size = min(12.0, 2.0 + 0.25 * n)
        fig, ax = plt.subplots(figsize=(size + 1.0, size))
        im = ax.imshow(values, cmap="viridis", vmin=vmin, vmax=vmax, interpolation="nearest")
        if labels is not None and n <= 60:
            ax.set_xticks(range(n), labels, rotation=90)
            ax.set_yticks(range(n), labels)
        if title:
            ax.set_title(title)
        fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04)
        _save(fig, path)


def ranking_grid(results: Sequence[tuple[AlgorithmCombo, float | None]]):
    """Rows: set measure x scaling; columns: IC x CS. Coefficient rows repeat across columns."""
    cols = [(ic, cs) for ic in IcMeasure for cs in CsMeasure]
    rows = [(s, scaled) for s in SetSimMeasure for scaled in (False, True)]
    grid = np.full((len(rows), len(cols)), np.nan)
    for combo, r in results:
        if r is None:
            continue
        i = rows.index((combo.set, combo.scaled))
        if combo.set.semantic:
            grid[i, cols.index((combo.ic, combo.cs))] = r
        else:
            grid[i, :] = r
    row_labels = [f"{s},{'scaled' if sc else 'unscaled'}" for s, sc in rows]
    col_labels = [f"{ic}/{cs}" for ic, cs in cols]
    return grid, row_labels, col_labels


def plot_ranking(results: Sequence[tuple[AlgorithmCombo, float | None]], path) -> None:
    grid, row_labels, col_labels = ranking_grid(results)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(9, 7))
        im = ax.imshow(grid, cmap="RdBu_r", vmin=-1.0, vmax=1.0, interpolation="nearest")
        ax.set_xticks(range(len(col_labels)), col_labels, rotation=60, ha="right")
        ax.set_yticks(range(len(row_labels)), row_labels)
        for (i, j), r in np.ndenumerate(grid):
            if np.isfinite(r):
                ax.text(j, i, f"{r:.2f}", ha="center", va="center", fontsize=6)
        ax.set_title("Pearson r against ground truth")
        fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04)
        _save(fig, path)
