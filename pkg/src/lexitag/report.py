"""Render evaluation reports to delimited files and matplotlib figures.

Everything written here is deterministic for identical inputs: TSV rows are
sorted and the PNGs are saved without timestamp metadata.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import EvalReport
from .tuner import TuningStep

__all__ = ["write_metrics_tsv", "write_errors_tsv", "plot_metrics", "plot_history", "write_report"]

_SAVE_KWARGS = {"dpi": 120, "metadata": {"Date": None}}


def label_color(label: str, shade: float = 0.0) -> str:
    """Deterministic color per label name so charts are stable across runs."""
    digest = sum(label.encode("utf-8")) * 2654435761 % 360
    hue = digest / 360.0
    import colorsys

    r, g, b = colorsys.hsv_to_rgb(hue, 0.65 - 0.25 * shade, 0.80)
    return f"#{int(r * 255):02x}{int(g * 255):02x}{int(b * 255):02x}"


def write_metrics_tsv(report: EvalReport, path: Union[str, Path]) -> None:
    rows = ["label\tprecision\trecall\tf1\ttp\tfp\tfn"]
    for label, m in sorted(report.per_label.items()):
        rows.append(
            f"{label}\t{m.precision:.4f}\t{m.recall:.4f}\t{m.f1:.4f}\t{m.tp}\t{m.fp}\t{m.fn}"
        )
    m = report.micro
    rows.append(
        f"micro\t{m.precision:.4f}\t{m.recall:.4f}\t{m.f1:.4f}\t{m.tp}\t{m.fp}\t{m.fn}"
    )
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_errors_tsv(report: EvalReport, path: Union[str, Path]) -> None:
    rows = ["kind\ttoken\tcount"]
    for token, count in report.top_false_positives:
        rows.append(f"false_positive\t{token}\t{count}")
    for token, count in report.top_false_negatives:
        rows.append(f"false_negative\t{token}\t{count}")
    Path(path).write_text("\n".join(rows) + "\n", encoding="utf-8")


def plot_metrics(report: EvalReport, path: Union[str, Path]) -> None:
    """Grouped per-label precision/recall/F1 bars."""
    labels = sorted(report.per_label)
    if not labels:
        labels = ["(none)"]
        values = {"precision": [0.0], "recall": [0.0], "f1": [0.0]}
    else:
        values = {
            "precision": [report.per_label[l].precision for l in labels],
            "recall": [report.per_label[l].recall for l in labels],
            "f1": [report.per_label[l].f1 for l in labels],
        }
    fig, ax = plt.subplots(figsize=(max(4.0, 1.6 * len(labels)), 3.2))
    width = 0.27
    xs = range(len(labels))
    for offset, (metric, series) in enumerate(values.items()):
        ax.bar(
            [x + (offset - 1) * width for x in xs],
            [100 * v for v in series],
            width=width,
            label=metric,
        )
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels)
    ax.set_ylabel("%")
    ax.set_ylim(0, 105)
    ax.legend(loc="lower right", fontsize=8)
    ax.set_title("token-level scores per label")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)


def plot_history(history: Sequence[TuningStep], path: Union[str, Path]) -> bool:
    """Precision/recall trajectory across tuning steps, one pair per label.

    Returns False (and writes nothing) when no step carries metrics.
    """
    steps = [s for s in history if s.metrics and s.metrics.get("labels")]
    if not steps:
        return False
    labels = sorted({label for s in steps for label in s.metrics["labels"]})
    xs = [s.index for s in steps]
    fig, ax = plt.subplots(figsize=(max(5.0, 1.1 * len(steps) + 3), 3.6))
    for label in labels:
        precision = [100 * s.metrics["labels"].get(label, {}).get("precision", 0.0) for s in steps]
        recall = [100 * s.metrics["labels"].get(label, {}).get("recall", 0.0) for s in steps]
        ax.plot(xs, precision, marker="o", color=label_color(label), label=f"{label} P")
        ax.plot(
            xs,
            recall,
            marker="s",
            linestyle="--",
            color=label_color(label, shade=1.0),
            label=f"{label} R",
        )
    ax.set_xticks(xs)
    ax.set_xticklabels(
        [s.description or str(s.index) for s in steps], rotation=30, ha="right", fontsize=7
    )
    ax.set_ylabel("%")
    ax.set_ylim(0, 105)
    ax.legend(fontsize=7, ncol=2)
    ax.set_title("precision/recall across tuning steps")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KWARGS)
    plt.close(fig)
    return True


def write_report(
    report: EvalReport,
    out_dir: Union[str, Path],
    history: Optional[Sequence[TuningStep]] = None,
) -> list[Path]:
    """Write metrics.tsv, errors.tsv and the figures; returns written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    write_metrics_tsv(report, out / "metrics.tsv")
    written.append(out / "metrics.tsv")
    write_errors_tsv(report, out / "errors.tsv")
    written.append(out / "errors.tsv")
    plot_metrics(report, out / "metrics.png")
    written.append(out / "metrics.png")
    if history and plot_history(history, out / "history.png"):
        written.append(out / "history.png")
    return written
