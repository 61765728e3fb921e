"""Static SVG plots for experiment reports, with the data mirrored to CSV.

Figures are rendered headlessly and deterministically: fixed hash salt for
SVG element ids, no embedded creation date, fonts rendered as paths.  Every
plot also writes its numeric series to a CSV next to the SVG so tests and
downstream tooling read values, never pixels.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "mobisamp"
matplotlib.rcParams["svg.fonttype"] = "path"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

PLOT_KINDS = ("spectrum-heatmap", "variance-vs-a", "variance-vs-k",
              "spacing-sweep")

__all__ = ["PLOT_KINDS", "emit_plot"]


def _csv_path(path: str) -> str:
    root, _ = os.path.splitext(str(path))
    return root + ".csv"


def _write_series_csv(series: dict, path: str) -> None:
    lines = ["series,x,y"]
    for label in sorted(series):
        xs, ys = series[label]
        for x, y in zip(np.asarray(xs, dtype=float).ravel(),
                        np.asarray(ys, dtype=float).ravel()):
            lines.append("%s,%.17g,%.17g" % (label, x, y))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_grid_csv(grid: np.ndarray, path: str) -> None:
    lines = ["i,j,value"]
    for (i, j), v in np.ndenumerate(grid):
        lines.append("%d,%d,%.17g" % (i, j, v))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _save(fig, path: str) -> None:
    fig.savefig(str(path), format="svg", metadata={"Date": None})
    plt.close(fig)


def _line_series(series: dict) -> dict:
    """Split off non-series scalar annotations (e.g. 'limit')."""
    lines = {}
    for label, value in series.items():
        if np.isscalar(value):
            continue
        xs, ys = value
        if len(np.asarray(xs).ravel()) == 0:
            raise ValueError("series %r is empty" % label)
        lines[label] = (xs, ys)
    if not lines:
        raise ValueError("no data series to plot")
    return lines


def emit_plot(series: dict, kind: str, path) -> tuple:
    """Render one figure kind to `path` (SVG) and its data to a sibling CSV.

    `series` maps labels to (x, y) sequences; `spectrum-heatmap` instead
    expects {"grid": 2-d array, "extent": (x0, x1, y0, y1)}.  A scalar entry
    named "limit" draws a vertical reference line where supported.  Returns
    (svg_path, csv_path).
    """
    if kind not in PLOT_KINDS:
        raise ValueError("unknown plot kind %r (one of %s)"
                         % (kind, ", ".join(PLOT_KINDS)))
    if not series:
        raise ValueError("no data series to plot")
    path = str(path)
    csv_path = _csv_path(path)

    if kind == "spectrum-heatmap":
        grid = np.asarray(series.get("grid"), dtype=float)
        if grid.size == 0:
            raise ValueError("heatmap grid is empty")
        extent = series.get("extent")
        fig, ax = plt.subplots(figsize=(5.0, 4.2))
        image = ax.imshow(grid.T, origin="lower",
                          extent=extent, aspect="auto", cmap="viridis")
        fig.colorbar(image, ax=ax)
        ax.set_xlabel("k_x")
        ax.set_ylabel("k_y")
        ax.set_title("error spectrum magnitude")
        _save(fig, path)
        _write_grid_csv(grid, csv_path)
        return path, csv_path

    lines = _line_series(series)
    fig, ax = plt.subplots(figsize=(5.0, 4.0))
    for label in sorted(lines):
        xs, ys = lines[label]
        ax.plot(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float),
                marker="o", label=label)
    if kind == "variance-vs-a":
        ax.set_xlabel("band ratio a")
        ax.set_ylabel("reconstruction noise variance")
    elif kind == "variance-vs-k":
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel("oversampling factor k")
        ax.set_ylabel("reconstruction noise variance")
    else:
        ax.set_yscale("log")
        ax.set_xlabel("sensor spacing")
        ax.set_ylabel("reconstruction error (%)")
        limit = series.get("limit")
        if limit is not None and np.isscalar(limit):
            ax.axvline(float(limit), color="k", linestyle="--",
                       label="spacing limit")
    ax.legend(loc="best")
    ax.grid(True, which="both", alpha=0.3)
    _save(fig, path)
    _write_series_csv(lines, csv_path)
    return path, csv_path
