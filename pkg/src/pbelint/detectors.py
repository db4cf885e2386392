"""The five ambiguity property detectors and their brute-force oracle.

Each detector looks for one aligned segment column whose cross-sample shape
admits more than one plausible extraction rule:

  similar_length  an input-derived column whose texts all have the same length
  exact_position  an input-derived column with a common occurrence start, or a
                  common occurrence end, achievable by choosing one occurrence
                  per sample
  exact_match     a column whose texts are identical AND occur in every input
                  (constant-vs-extract duality)
  token_type      an input-derived column whose texts are each single-class
                  (alphabet / numeric / special) with the same class everywhere
  repeating       an input-derived column with at least two distinct occurrence
                  starts in every sample's input

oracle_detect_all re-evaluates the same predicates by exhaustively enumerating
every per-sample occurrence-position tuple with no pruning or early exit; it
defines ground truth for tests and for dataset generation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .alignment import DERIVED, SegmentAlignment, align_example
from .annotations import PROPERTIES, Example, PropertyLabels

ALPHA = "alphabet"
NUMERIC = "numeric"
SPECIAL = "special"


class OracleScaleError(ValueError):
    """The example exceeds the oracle's exhaustive-enumeration bounds."""


ORACLE_MAX_INPUT = 64
ORACLE_MAX_OUTPUT = 32


@dataclass(frozen=True)
class Witness:
    """The segment column and positions that justify one positive verdict."""

    property: str
    segment_index: int
    texts: tuple[str, ...]
    positions: tuple[tuple[int, ...], ...]

    def as_dict(self) -> dict:
        return {
            "property": self.property,
            "segment_index": self.segment_index,
            "texts": list(self.texts),
            "positions": [list(p) for p in self.positions],
        }


@dataclass(frozen=True)
class AmbiguityReport:
    labels: PropertyLabels
    witnesses: tuple[Witness, ...]
    diagnostics: tuple[str, ...] = ()

    def as_dict(self, example_id: str) -> dict:
        return {
            "id": example_id,
            "labels": self.labels.as_dict(),
            "witnesses": [w.as_dict() for w in self.witnesses],
            "diagnostics": list(self.diagnostics),
        }


def char_class(ch: str) -> str:
    if "A" <= ch <= "Z" or "a" <= ch <= "z":
        return ALPHA
    if "0" <= ch <= "9":
        return NUMERIC
    return SPECIAL


def text_class(text: str) -> Optional[str]:
    """The single character class of text, or None if classes are mixed."""
    classes = {char_class(c) for c in text}
    if len(classes) == 1:
        return classes.pop()
    return None


def _columns(alignment: SegmentAlignment):
    for j in range(alignment.k):
        yield j, [segs[j] for segs in alignment.per_sample]


def detect_similar_length(alignment: SegmentAlignment):
    if not alignment.aligned:
        return False, None
    for j, column in _columns(alignment):
        if column[0].kind != DERIVED:
            continue
        if len({len(seg.text) for seg in column}) == 1:
            return True, Witness(
                "similar_length",
                j,
                tuple(seg.text for seg in column),
                tuple(seg.occurrences for seg in column),
            )
    return False, None


def detect_exact_position(alignment: SegmentAlignment):
    if not alignment.aligned:
        return False, None
    for j, column in _columns(alignment):
        if column[0].kind != DERIVED:
            continue
        common_starts = set(column[0].occurrences)
        common_ends = {o + len(column[0].text) for o in column[0].occurrences}
        for seg in column[1:]:
            common_starts &= set(seg.occurrences)
            common_ends &= {o + len(seg.text) for o in seg.occurrences}
        if common_starts:
            start = min(common_starts)
            return True, Witness(
                "exact_position",
                j,
                tuple(seg.text for seg in column),
                tuple((start,) for _ in column),
            )
        if common_ends:
            end = min(common_ends)
            return True, Witness(
                "exact_position",
                j,
                tuple(seg.text for seg in column),
                tuple((end - len(seg.text),) for seg in column),
            )
    return False, None


def detect_exact_match(alignment: SegmentAlignment):
    if not alignment.aligned:
        return False, None
    for j, column in _columns(alignment):
        texts = {seg.text for seg in column}
        if len(texts) == 1 and all(seg.occurrences for seg in column):
            return True, Witness(
                "exact_match",
                j,
                tuple(seg.text for seg in column),
                tuple(seg.occurrences for seg in column),
            )
    return False, None


def detect_token_type(alignment: SegmentAlignment):
    if not alignment.aligned:
        return False, None
    for j, column in _columns(alignment):
        if column[0].kind != DERIVED:
            continue
        classes = {text_class(seg.text) for seg in column}
        if len(classes) == 1 and None not in classes:
            return True, Witness(
                "token_type",
                j,
                tuple(seg.text for seg in column),
                tuple(seg.occurrences for seg in column),
            )
    return False, None


def detect_repeating(alignment: SegmentAlignment):
    if not alignment.aligned:
        return False, None
    for j, column in _columns(alignment):
        if column[0].kind != DERIVED:
            continue
        if all(len(set(seg.occurrences)) >= 2 for seg in column):
            return True, Witness(
                "repeating",
                j,
                tuple(seg.text for seg in column),
                tuple(seg.occurrences for seg in column),
            )
    return False, None


_DETECTORS = {
    "similar_length": detect_similar_length,
    "exact_position": detect_exact_position,
    "exact_match": detect_exact_match,
    "token_type": detect_token_type,
    "repeating": detect_repeating,
}


def detect_all(example: Example) -> AmbiguityReport:
    """Run the alignment and all five detectors on one example."""
    if len(example.samples) < 2:
        raise ValueError(
            f"example {example.id!r}: need at least 2 samples for detection"
        )
    alignment = align_example(example)
    if not alignment.aligned:
        return AmbiguityReport(
            PropertyLabels.all_false(),
            (),
            (f"unalignable: {alignment.reason}",),
        )
    labels = {}
    witnesses = []
    for name in PROPERTIES:
        verdict, witness = _DETECTORS[name](alignment)
        labels[name] = verdict
        if witness is not None:
            witnesses.append(witness)
    return AmbiguityReport(PropertyLabels(**labels), tuple(witnesses))


def oracle_detect_all(example: Example) -> PropertyLabels:
    """Ground-truth labels by exhaustive occurrence-tuple enumeration.

    Same canonical segmentation as detect_all, but every predicate is decided
    by iterating the full cross product of per-sample occurrence positions,
    accumulating without pruning or early exit. Refuses oversized examples.
    """
    if len(example.samples) < 2:
        raise ValueError(
            f"example {example.id!r}: need at least 2 samples for detection"
        )
    for sample in example.samples:
        if len(sample.input) > ORACLE_MAX_INPUT:
            raise OracleScaleError(
                f"input longer than {ORACLE_MAX_INPUT} chars exceeds oracle bounds"
            )
        if len(sample.output) > ORACLE_MAX_OUTPUT:
            raise OracleScaleError(
                f"output longer than {ORACLE_MAX_OUTPUT} chars exceeds oracle bounds"
            )
    alignment = align_example(example)
    if not alignment.aligned:
        return PropertyLabels.all_false()

    similar_length = False
    exact_position = False
    exact_match = False
    token_type = False
    repeating = False

    for _, column in _columns(alignment):
        derived = column[0].kind == DERIVED
        texts = [seg.text for seg in column]
        occurrence_lists = [seg.occurrences for seg in column]

        if derived:
            lengths = {len(t) for t in texts}
            similar_length |= len(lengths) == 1

            for chosen in itertools.product(*occurrence_lists):
                starts = set(chosen)
                ends = {pos + len(t) for pos, t in zip(chosen, texts)}
                exact_position |= len(starts) == 1 or len(ends) == 1

            classes = {text_class(t) for t in texts}
            token_type |= len(classes) == 1 and None not in classes

            pair_lists = [
                list(itertools.combinations(sorted(set(occ)), 2))
                for occ in occurrence_lists
            ]
            for _ in itertools.product(*pair_lists):
                repeating |= True

        if len(set(texts)) == 1:
            for _ in itertools.product(*occurrence_lists):
                exact_match |= True

    return PropertyLabels(
        similar_length=similar_length,
        exact_position=exact_position,
        exact_match=exact_match,
        token_type=token_type,
        repeating=repeating,
    )
