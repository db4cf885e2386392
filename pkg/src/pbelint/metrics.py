"""Per-property scoring of predictions against gold labels.

PF1 treats the ambiguous (true) label as the positive class, NF1 the
non-ambiguous (false) label; 0/0 F1 is defined as 0. Records are joined on id
and partial prediction files are rejected rather than silently skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .annotations import PROPERTIES, DatasetRecord, PredictionRecord


class ScoringError(ValueError):
    pass


@dataclass(frozen=True)
class PropertyScore:
    pf1: float
    nf1: float
    accuracy: float
    tp: int
    fp: int
    tn: int
    fn: int

    def as_dict(self) -> dict:
        return {
            "pf1": self.pf1,
            "nf1": self.nf1,
            "accuracy": self.accuracy,
            "confusion": {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn},
        }


def _f1(tp: int, fp: int, fn: int) -> float:
    denom = 2 * tp + fp + fn
    return 2 * tp / denom if denom else 0.0


def score(
    gold: Sequence[DatasetRecord], predictions: Sequence[PredictionRecord]
) -> dict[str, PropertyScore]:
    """Confusion counts and F1/accuracy per property over the id-joined records."""
    if not gold:
        raise ScoringError("no gold records to score against")
    gold_labels = {}
    for record in gold:
        if record.labels is None:
            raise ScoringError(
                f"gold record {record.example.id!r} has no labels"
            )
        gold_labels[record.example.id] = record.labels

    predicted = {}
    for record in predictions:
        if record.id in predicted:
            raise ScoringError(f"duplicate prediction id {record.id!r}")
        if record.id not in gold_labels:
            raise ScoringError(f"prediction id {record.id!r} not in gold set")
        predicted[record.id] = record.pred
    missing = sorted(set(gold_labels) - set(predicted))
    if missing:
        raise ScoringError(
            f"{len(missing)} gold ids have no prediction (first: {missing[0]!r})"
        )

    scores = {}
    for name in PROPERTIES:
        tp = fp = tn = fn = 0
        for example_id, labels in gold_labels.items():
            truth = getattr(labels, name)
            guess = getattr(predicted[example_id], name)
            if truth and guess:
                tp += 1
            elif not truth and guess:
                fp += 1
            elif truth and not guess:
                fn += 1
            else:
                tn += 1
        total = tp + fp + tn + fn
        scores[name] = PropertyScore(
            pf1=_f1(tp, fp, fn),
            nf1=_f1(tn, fn, fp),
            accuracy=(tp + tn) / total,
            tp=tp,
            fp=fp,
            tn=tn,
            fn=fn,
        )
    return scores
