"""CSV and SVG emission for sweep results."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .sweep import COLUMNS

__all__ = ["emit_csv", "emit_plot", "format_value"]


def format_value(v) -> str:
    """Stable cell formatting: floats at 12 significant digits."""
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def emit_csv(rows: list[dict], path: str | Path) -> Path:
    """Write sweep rows as RFC-4180 CSV (header + one record per point)."""
    if not rows:
        raise ValueError("refusing to write an empty table")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for row in rows:
            writer.writerow([format_value(row.get(col, "")) for col in COLUMNS])
    return path


def read_csv(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def emit_plot(rows: list[dict], path: str | Path, title: str = "") -> Path:
    """SVG line plot of coverage vs the sweep axis with the CI band."""
    if not rows:
        raise ValueError("refusing to plot an empty table")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    by_label: dict[str, list[dict]] = {}
    for row in rows:
        if row.get("error"):
            continue
        key = f"{row.get('label') or row.get('mode')}"
        by_label.setdefault(key, []).append(row)

    axis_name = rows[0]["axis"]
    for label, series in by_label.items():
        x = [float(r["value"]) for r in series]
        p = [float(r["p_hat"]) for r in series]
        lo = [float(r["ci_low"]) for r in series]
        hi = [float(r["ci_high"]) for r in series]
        ax.plot(x, p, marker="o", label=label)
        ax.fill_between(x, lo, hi, alpha=0.25)
        ana = [(xx, float(r["analytic_p"])) for xx, r in zip(x, series) if r.get("analytic_p")]
        if ana:
            ax.plot(*zip(*ana), linestyle="--", marker="x", label=f"{label} (analytic)")

    if axis_name == "Ns" or axis_name == "carrier_freq":
        ax.set_xscale("log")
    ax.set_xlabel(axis_name)
    ax.set_ylabel("coverage probability")
    ax.set_ylim(-0.02, 1.02)
    ax.grid(True, alpha=0.4)
    ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path
