r"""
Self-contained SVG figures of histograms with their fit overlay.
"""
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import matplotlib

matplotlib.use("Agg")  # must be set before importing pyplot
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

logger = logging.getLogger(__name__)

FIGURE_SIZE = (7.0, 4.5)


def _save(fig, path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
    logger.debug("Figure written to %s", path)
    return path


def plot_histogram(
    path: str,
    x: Sequence[float],
    counts: Sequence[float],
    fit: Optional[Tuple[Sequence[float], Sequence[float]]] = None,
    xlabel: str = "delay (ns)",
    ylabel: str = "coincidences",
    title: Optional[str] = None,
    logy: bool = False,
) -> str:
    r"""
    Draw `counts` against `x` as steps, with an optional `(x, y)` fit curve on top, and write it as SVG.

    Returns:
        the path written
    """
    fig, ax = plt.subplots(figsize=FIGURE_SIZE)
    ax.step(np.asarray(x), np.asarray(counts), where="mid", linewidth=0.8, color="tab:blue", label="data")
    if fit is not None:
        ax.plot(np.asarray(fit[0]), np.asarray(fit[1]), linewidth=1.2, color="tab:red", label="fit")
        ax.legend(loc="best", frameon=False)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    return _save(fig, path)


def plot_ensemble(path: str, histograms: Dict[str, Dict], units: Optional[Dict[str, str]] = None) -> str:
    r"""
    One panel per property, each drawing a histogram given as `{"counts": [...], "edges": [...]}` together with
    the mean and standard deviation when present (`{"mean": {"value": ...}, "std": ...}`).
    """
    units = units or {}
    fig, axes = plt.subplots(1, max(len(histograms), 1), figsize=(4.0 * max(len(histograms), 1), 3.5),
                             squeeze=False)
    for ax, (name, stats) in zip(axes[0], histograms.items()):
        edges = np.asarray(stats["histogram"]["edges"])
        counts = np.asarray(stats["histogram"]["counts"])
        ax.bar(edges[:-1], counts, width=np.diff(edges), align="edge", color="tab:blue", alpha=0.7)
        if "mean" in stats:
            mean, std = stats["mean"]["value"], stats.get("std", 0.0)
            ax.axvline(mean, color="tab:red", linewidth=1.2)
            ax.axvspan(mean - std, mean + std, color="tab:red", alpha=0.15)
        unit = units.get(name)
        ax.set_xlabel(f"{name} ({unit})" if unit else name)
        ax.set_ylabel("emitters")
    return _save(fig, path)


@dataclass
class HistogramFigure:
    r""" Data of a `plot_histogram` figure, drawn once an output path is known. """

    x: Sequence[float]
    counts: Sequence[float]
    fit: Optional[Tuple[Sequence[float], Sequence[float]]] = None
    xlabel: str = "delay (ns)"
    ylabel: str = "coincidences"
    title: Optional[str] = None
    logy: bool = False

    def draw(self, path: str) -> str:
        return plot_histogram(path, self.x, self.counts, fit=self.fit, xlabel=self.xlabel, ylabel=self.ylabel,
                              title=self.title, logy=self.logy)


@dataclass
class EnsembleFigure:
    histograms: Dict[str, Dict]
    units: Dict[str, str] = field(default_factory=dict)

    def draw(self, path: str) -> str:
        return plot_ensemble(path, self.histograms, self.units)
