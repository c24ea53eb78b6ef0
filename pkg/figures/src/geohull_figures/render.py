"""Scatter plots of slice CSVs (columns s,h).

Rendering is a pure function of the CSV bytes plus the style constants
below: fixed figure geometry, fixed DPI, no timestamps in the output.
The script never recomputes geometry; it only plots what the CSV says.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

DPI = 150
FIGSIZE = (6.4, 4.8)
MARKER_SIZE = 4.0
POINT_COLOR = "#1f4e79"
# pinned so the PNG carries no library version or date
PNG_METADATA = {"Software": "geohull-figures"}


def read_slice(path) -> np.ndarray:
    """Parse a slice CSV into an (n, 2) array of finite (s, h) rows."""
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["s", "h"]:
            raise ValueError(f"{path}: expected header 's,h', got {header!r}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or not any(c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 columns")
            try:
                s, h = float(row[0]), float(row[1])
            except ValueError:
                raise ValueError(
                    f"{path}:{lineno}: not a number: {row!r}") from None
            if not (math.isfinite(s) and math.isfinite(h)):
                raise ValueError(f"{path}:{lineno}: non-finite value {row!r}")
            rows.append((s, h))
    if not rows:
        return np.empty((0, 2))
    return np.array(rows)


def render_slice(csv_path, out_path, title: str | None = None) -> dict:
    """Render the slice scatter to a PNG; returns a summary of what was
    drawn (point count, data extents, whether the empty warning fired)."""
    data = read_slice(csv_path)
    if title is None:
        title = Path(csv_path).stem
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    warned = data.shape[0] == 0
    if warned:
        extents = None
        ax.text(0.5, 0.5, "warning: no points in slice",
                transform=ax.transAxes, ha="center", va="center",
                fontsize=12, color="#b00020")
        caption = "0 points"
    else:
        ax.scatter(data[:, 0], data[:, 1], s=MARKER_SIZE, c=POINT_COLOR,
                   linewidths=0.0)
        extents = (float(data[:, 0].min()), float(data[:, 0].max()),
                   float(data[:, 1].min()), float(data[:, 1].max()))
        caption = (f"{data.shape[0]} points, "
                   f"s in [{extents[0]:.4f}, {extents[1]:.4f}], "
                   f"h in [{extents[2]:.4f}, {extents[3]:.4f}]")
    ax.set_aspect("auto")  # s and h scales are unrelated
    ax.set_xlabel("s (arclength along the plane)")
    ax.set_ylabel("height")
    ax.set_title(title)
    fig.text(0.5, 0.01, caption, ha="center", fontsize=8, color="#555555")
    fig.subplots_adjust(bottom=0.14)
    fig.savefig(out_path, dpi=DPI, metadata=PNG_METADATA)
    plt.close(fig)
    return {"points": int(data.shape[0]), "extents": extents,
            "warned": warned, "out": str(out_path)}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="geohull-figures",
        description="Render a geohull slice CSV (columns s,h) to a PNG "
                    "scatter plot.")
    parser.add_argument("--in", dest="infile", required=True, metavar="CSV",
                        help="slice CSV to plot")
    parser.add_argument("--out", required=True, metavar="PNG",
                        help="output image path")
    parser.add_argument("--title", default=None,
                        help="plot title (default: input file stem)")
    args = parser.parse_args(argv)
    try:
        summary = render_slice(args.infile, args.out, args.title)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    note = " (empty slice)" if summary["warned"] else ""
    print(f"wrote {args.out}: {summary['points']} points{note}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
