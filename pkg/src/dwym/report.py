"""Deterministic CSV emission, text reports, and rendered figures.

CSV files are byte-reproducible for a fixed config and seed: floats are
formatted with %.17g (round-trip exact), one record per cadence step.
Figures are rendered to PNG next to the delimited output.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

FIG_DPI = 130


def format_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(v)
    return f"{float(v):.17g}"


def write_csv(path, header: list[str], rows: list[tuple]) -> Path:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_report(path, title: str, config_lines: list[str],
                 body_lines: list[str]) -> Path:
    path = Path(path)
    text = [f"# {title}", "", "## effective configuration"]
    text += [f"  {line}" for line in config_lines]
    text += ["", "## results"]
    text += body_lines
    path.write_text("\n".join(text) + "\n")
    return path


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=FIG_DPI)
    plt.close(fig)
    return Path(path)


def fig_timeseries(path, times, series: dict[str, list], title: str,
                   logy: bool = False) -> Path:
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, values in series.items():
        ax.plot(times, values, lw=1.2, label=label)
    ax.set_xlabel("t")
    ax.set_title(title)
    if logy:
        ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def fig_convergence(path, spacings, series: dict[str, list], title: str) -> Path:
    """Residuals vs lattice spacing on log-log axes with an h^2 guide."""
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    series = {k: [max(float(x), 1e-18) for x in v] for k, v in series.items()}
    for label, values in series.items():
        ax.loglog(spacings, values, "o-", lw=1.2, label=label)
    ref = max(max(v) for v in series.values() if len(v))
    guide = [ref * (h / spacings[0]) ** 2 for h in spacings]
    ax.loglog(spacings, guide, "k--", lw=0.8, label="order 2 guide")
    ax.set_xlabel("spacing")
    ax.set_ylabel("residual")
    ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3, which="both")
    return _finish(fig, path)


def fig_dispersion(path, kappas, measured, discrete, continuum, title: str) -> Path:
    fig, ax = plt.subplots(figsize=(5.2, 4.0))
    ax.plot(kappas, continuum, "k-", lw=1.0, label="continuum")
    ax.plot(kappas, discrete, "b--", lw=1.0, label="lattice relation")
    ax.plot(kappas, measured, "ro", ms=4, label="measured")
    ax.set_xlabel("wavenumber")
    ax.set_ylabel("frequency")
    ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    return _finish(fig, path)
