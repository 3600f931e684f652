"""Figure rendering for benchmark reports.

The CSV stays the canonical machine-readable output; these helpers render
the usual companion pictures next to it -- accuracy against window length
per method, and one confusion heatmap per report.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_METHOD_STYLE = {
    "baseline_sscca": dict(color="tab:gray", marker="s", label="SSCCA baseline"),
    "proposed_fusion": dict(color="tab:blue", marker="o", label="filterbank fusion"),
}


def render_accuracy_figure(reports, path) -> Path:
    """Accuracy vs. window length, one curve per method, chance level dashed."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5.5, 4))
    by_method = {}
    for report in reports:
        by_method.setdefault(report.method.value, []).append((report.window_s, report.accuracy))
    for method, points in by_method.items():
        points.sort()
        style = _METHOD_STYLE.get(method, dict(marker="o", label=method))
        ax.plot(*zip(*points), linestyle="-", **style)
    n_classes = reports[0].confusion.shape[0]
    ax.axhline(1.0 / n_classes, color="k", linestyle="--", linewidth=0.8, label="chance")
    ax.set_xlabel("window length (s)")
    ax.set_ylabel("accuracy")
    ax.set_ylim(0.0, 1.05)
    ax.grid(alpha=0.3)
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_confusion_figure(report, frequencies_hz, path) -> Path:
    """Heatmap of one confusion matrix with stimulus frequencies on the axes."""
    path = Path(path)
    confusion = report.confusion
    n = confusion.shape[0]
    fig, ax = plt.subplots(figsize=(5.5, 4.8))
    im = ax.imshow(confusion, cmap="Blues", vmin=0)
    labels = [f"{f:g}" for f in frequencies_hz]
    ax.set_xticks(range(n), labels, rotation=90, fontsize=7)
    ax.set_yticks(range(n), labels, fontsize=7)
    ax.set_xlabel("decision (Hz)")
    ax.set_ylabel("stimulus (Hz)")
    ax.set_title(f"{report.method.value}, {report.window_s:g} s window")
    if n <= 16:
        threshold = confusion.max() / 2 if confusion.max() else 1
        for i in range(n):
            for j in range(n):
                if confusion[i, j]:
                    ax.text(
                        j, i, str(confusion[i, j]),
                        ha="center", va="center", fontsize=6,
                        color="white" if confusion[i, j] > threshold else "black",
                    )
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_bench_figures(reports, frequencies_hz, out_dir) -> list:
    """Render the standard bench figure set into ``out_dir``; returns the paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [render_accuracy_figure(reports, out_dir / "accuracy_vs_window.png")]
    for report in reports:
        name = f"confusion_{report.method.value}_{report.window_s:g}s.png"
        paths.append(render_confusion_figure(report, frequencies_hz, out_dir / name))
    return paths
