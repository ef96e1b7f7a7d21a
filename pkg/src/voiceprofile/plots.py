"""Figure rendering for report artifacts.

Every function writes a PNG to the given path and closes the figure;
nothing is shown interactively. Imported lazily by the report path so
the numeric library modules never pay the matplotlib import cost.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .stats import EcdfCurve

_COLORS = {"male": "tab:blue", "female": "tab:orange"}


def _color(label: str) -> str:
    return _COLORS.get(label, "tab:gray")


def _save(fig, path: Path) -> None:
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def render_histogram(
    bins_by_label: dict[str, list[tuple[float, int]]], bin_width_cm: float, path: str | Path
) -> None:
    """Side-by-side height histograms, one panel per group."""
    labels = list(bins_by_label)
    fig, axes = plt.subplots(1, len(labels), figsize=(5.0 * len(labels), 3.6), squeeze=False)
    for ax, label in zip(axes[0], labels):
        bins = bins_by_label[label]
        ax.bar(
            [left for left, _ in bins],
            [count for _, count in bins],
            width=bin_width_cm,
            align="edge",
            color=_color(label),
            edgecolor="white",
        )
        ax.set_title(label)
        ax.set_xlabel("height [cm]")
        ax.set_ylabel("speakers")
    fig.tight_layout()
    _save(fig, Path(path))


def render_ecdf(curves: dict[str, EcdfCurve], path: str | Path) -> None:
    """Empirical CDFs of absolute prediction error, one step line each."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for label, curve in curves.items():
        ax.step(
            curve.sorted_values,
            curve.cumulative_probs,
            where="post",
            label=label,
            color=_color(label),
        )
    ax.set_xlabel("absolute error [cm]")
    ax.set_ylabel("cumulative proportion")
    ax.set_ylim(0.0, 1.0)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, Path(path))


def render_sweep(curves: dict[str, list[tuple[int, float]]], path: str | Path) -> None:
    """Validation MAE against retained component count."""
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    for label, curve in curves.items():
        ax.plot(
            [k for k, _ in curve],
            [mae for _, mae in curve],
            marker=".",
            label=label,
            color=_color(label),
        )
    ax.set_xlabel("components")
    ax.set_ylabel("validation MAE [cm]")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, Path(path))
