"""Matplotlib rendering for the report path.

All figures go straight to files through the Agg backend so the CLI works
headless.  SVG output is pinned for reproducibility: hashed ids get a fixed
salt and the date field is dropped.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .sampling import SurfaceTable, parse_projection  # noqa: E402
from .torus import RealityScan  # noqa: E402

matplotlib.rcParams["svg.hashsalt"] = "blochtorus"

_COORD_NAMES = ("x1", "x2", "x3", "x4")
_SAVE_KW = {"metadata": {"Date": None}}


def _savefig(fig, out_path: str) -> str:
    if str(out_path).lower().endswith(".svg"):
        fig.savefig(out_path, **_SAVE_KW)
    else:
        fig.savefig(out_path)
    plt.close(fig)
    return str(out_path)


def save_projection_figure(
    table: SurfaceTable, projection: str, out_path: str
) -> str:
    """Render sampled surface points under a 2- or 3-axis projection.

    Two axes give an orthographic polyline over the sample order; three
    give a scatter.
    """
    size = len(str(projection).strip())
    if size not in (2, 3):
        raise ValueError("figure projection needs 2 or 3 coordinate indices")
    axes = parse_projection(projection, size)
    cols = {name: [] for name in _COORD_NAMES}
    for row in table.rows:
        if row.flag != "ok":
            continue
        for name, value in zip(_COORD_NAMES, (row.x1, row.x2, row.x3, row.x4)):
            cols[name].append(value)
    picked = [np.asarray(cols[_COORD_NAMES[i - 1]]) for i in axes]

    if len(axes) == 2:
        fig, ax = plt.subplots(figsize=(6.0, 6.0))
        ax.plot(picked[0], picked[1], "-", linewidth=0.7, color="#1f5fa8")
        ax.set_xlabel(_COORD_NAMES[axes[0] - 1])
        ax.set_ylabel(_COORD_NAMES[axes[1] - 1])
        ax.set_aspect("equal", adjustable="datalim")
    else:
        fig = plt.figure(figsize=(7.0, 6.0))
        ax = fig.add_subplot(projection="3d")
        ax.scatter(picked[0], picked[1], picked[2], s=3.0, color="#1f5fa8")
        ax.set_xlabel(_COORD_NAMES[axes[0] - 1])
        ax.set_ylabel(_COORD_NAMES[axes[1] - 1])
        ax.set_zlabel(_COORD_NAMES[axes[2] - 1])
    ax.set_title(f"surface sample, projection {projection}")
    fig.tight_layout()
    return _savefig(fig, out_path)


def save_scan_figure(scan: RealityScan, out_path: str) -> str:
    """Heatmap of |Im(k1 h1)| over the (a, b) grid with its zero locus."""
    fig, ax = plt.subplots(figsize=(7.0, 5.5))
    extent = [
        float(scan.a_values[0]),
        float(scan.a_values[-1]),
        float(scan.b_values[0]),
        float(scan.b_values[-1]),
    ]
    # im_k1h1 is indexed [a, b]; transpose so b runs along the y axis
    img = ax.imshow(
        np.abs(scan.im_k1h1).T,
        origin="lower",
        extent=extent,
        aspect="auto",
        cmap="viridis",
    )
    fig.colorbar(img, ax=ax, label="|Im(k1 h1)|")
    if scan.zero_mask.any():
        aa, bb = np.meshgrid(scan.a_values, scan.b_values, indexing="ij")
        ax.plot(
            aa[scan.zero_mask],
            bb[scan.zero_mask],
            ".",
            markersize=1.5,
            color="#ff3333",
            label="zero locus",
        )
        ax.legend(loc="upper right")
    ax.set_xlabel("a")
    ax.set_ylabel("b")
    ax.set_title("reality scan of the squared potential")
    fig.tight_layout()
    return _savefig(fig, out_path)


def save_audit_figure(report_dict: dict, out_path: str) -> str:
    """Bar chart of audit residuals against their tolerances (log scale)."""
    names, residuals, tols, verdicts = [], [], [], []
    for check in report_dict["checks"]:
        if check["residual"] is None:
            continue
        names.append(check["check_id"])
        residuals.append(max(check["residual"], 1e-18))
        tols.append(check["tolerance"])
        verdicts.append(check["verdict"])
    pos = np.arange(len(names))
    colors = ["#2a9d4e" if v == "pass" else "#d03030" for v in verdicts]

    fig, ax = plt.subplots(figsize=(8.5, 0.45 * max(len(names), 4) + 1.8))
    ax.barh(pos, residuals, color=colors)
    for i, t in enumerate(tols):
        if t is not None:
            ax.plot([t, t], [i - 0.4, i + 0.4], color="black", linewidth=1.2)
    ax.set_yticks(pos)
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xscale("log")
    ax.set_xlabel("residual (ticks mark tolerances)")
    ax.set_title("audit residuals")
    ax.invert_yaxis()
    fig.tight_layout()
    return _savefig(fig, out_path)
