"""Matplotlib renderings of lint and eval reports, written next to the JSONL output."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .annotations import PROPERTIES
from .metrics import PropertyScore


def render_label_frequencies(reports: Sequence[dict], path: str) -> None:
    """Bar chart of how many linted examples are flagged per property."""
    counts = [sum(r["labels"][name] for r in reports) for name in PROPERTIES]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(len(PROPERTIES)), counts, color="#35618f")
    ax.set_xticks(range(len(PROPERTIES)))
    ax.set_xticklabels(PROPERTIES, rotation=20, ha="right")
    ax.set_ylabel("examples flagged")
    ax.set_title(f"Ambiguity properties across {len(reports)} examples")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_scores(scores: dict[str, PropertyScore], path: str) -> None:
    """Grouped bars of NF1 / PF1 / accuracy per property."""
    names = [n for n in PROPERTIES if n in scores]
    metrics = ("nf1", "pf1", "accuracy")
    width = 0.25
    fig, ax = plt.subplots(figsize=(8, 4))
    for offset, metric in enumerate(metrics):
        values = [getattr(scores[n], metric) for n in names]
        ax.bar(
            [i + (offset - 1) * width for i in range(len(names))],
            values,
            width=width,
            label=metric.upper() if metric != "accuracy" else "Acc",
        )
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=20, ha="right")
    ax.set_ylim(0, 1.05)
    ax.legend()
    ax.set_title("Per-property scores")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
