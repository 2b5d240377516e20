"""Render sweep results to figure files next to the delimited output.

matplotlib is imported lazily so the data-only paths never touch it.
"""

from __future__ import annotations

import os
from typing import Sequence

from .alloc import SweepResult

_LINE_STYLES = ("-", "--", "-.", ":")


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_share_figure(result: SweepResult, method_tag: str,
                        path: str) -> str:
    """One share-vs-exponent curve per team, written as a PNG."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for k, team in enumerate(result.teams):
        shares = [record.weights[method_tag].w[k] for record in result.records]
        ax.plot(result.alphas, shares, _LINE_STYLES[k % len(_LINE_STYLES)],
                label=team)
    ax.set_xlabel("inequality exponent")
    ax.set_ylabel("revenue share")
    ax.set_title(f"Revenue shares ({method_tag})")
    ax.grid(True, axis="y", alpha=0.4)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_concentration_figure(result: SweepResult, path: str) -> str:
    """Normalized concentration against the exponent, one curve per method."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for k, tag in enumerate(result.methods):
        values = [record.hhi_star[tag] for record in result.records]
        ax.plot(result.alphas, values, _LINE_STYLES[k % len(_LINE_STYLES)],
                label=tag)
    ax.set_xlabel("inequality exponent")
    ax.set_ylabel("normalized concentration")
    ax.set_title("Allocation concentration")
    ax.grid(True, axis="y", alpha=0.4)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_sweep_figures(result: SweepResult, out_dir: str) -> Sequence[str]:
    """Write share curves per method plus the concentration figure."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for tag in result.methods:
        written.append(render_share_figure(
            result, tag, os.path.join(out_dir, f"shares_{tag}.png")))
    written.append(render_concentration_figure(
        result, os.path.join(out_dir, "hhi_star.png")))
    return written
