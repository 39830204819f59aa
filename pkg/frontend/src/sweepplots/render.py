"""Figure rendering: latency vs gamma per privacy level, and an upload
comparison when a second (no-upload) sweep is supplied.

Rendering is a pure function of the input CSVs; identical inputs give
identical curves. Output: PNG and SVG per figure in the output directory.
"""

from __future__ import annotations

import os
from typing import List, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .table import SweepTable, TableError, load_sweep_csv

# Fixed salt so SVG element ids do not change between runs.
plt.rcParams["svg.hashsalt"] = "sweepplots"

_COLORS = {
    ("baseline", True): "tab:gray",
    ("private", True): None,  # cycle per z below
}
_Z_COLORS = ["tab:blue", "tab:orange", "tab:green", "tab:red", "tab:purple"]


def _curve_color(curve) -> str:
    if curve.scheme == "baseline":
        return "tab:gray"
    return _Z_COLORS[curve.z % len(_Z_COLORS)]


def _plot_curves(ax, table: SweepTable, suffix: str = "", dashed: bool = False):
    for curve in table.curves():
        yerr = curve.ses if any(s > 0 for s in curve.ses) else None
        ax.errorbar(
            curve.gammas,
            curve.costs,
            yerr=yerr,
            label=curve.label + suffix,
            color=_curve_color(curve),
            linestyle="--" if dashed else "-",
            marker="o",
            markersize=3,
            capsize=2,
        )


def _finish(ax, title: str):
    ax.set_xlabel("upload/download cost factor $\\gamma$")
    ax.set_ylabel("overall normalized latency")
    ax.set_yscale("log")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()


def _save(fig, out_dir: str, stem: str) -> List[str]:
    paths = []
    for ext in ("png", "svg"):
        path = os.path.join(out_dir, f"{stem}.{ext}")
        fig.savefig(path, dpi=150, metadata={"Date": None} if ext == "svg" else None)
        paths.append(path)
    return paths


def render(csv_paths: List[str], out_dir: str) -> List[str]:
    """Render figures from one or two sweep CSVs; returns written paths.

    One CSV: latency vs gamma, one curve per (scheme, z). Two CSVs: also a
    comparison figure overlaying the second sweep (dashed) on the first,
    e.g. a with-upload vs no-upload run pair.
    """
    if not 1 <= len(csv_paths) <= 2:
        raise TableError("expected one or two input CSVs")
    tables = [load_sweep_csv(path) for path in csv_paths]
    for table in tables:
        if not table.rows:
            raise TableError(f"{table.path}: no data rows")
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise TableError(f"cannot create output directory {out_dir}: {exc}") from exc

    written = []
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    _plot_curves(ax, tables[0])
    _finish(ax, "latency vs communication cost")
    written += _save(fig, out_dir, "latency_vs_gamma")
    plt.close(fig)

    if len(tables) == 2:
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        _plot_curves(ax, tables[0], suffix=" (with upload)")
        _plot_curves(ax, tables[1], suffix=" (no upload)", dashed=True)
        _finish(ax, "upload contribution to overall latency")
        written += _save(fig, out_dir, "upload_comparison")
        plt.close(fig)
    return written
