"""Canonical segmentation of outputs against their inputs.

Every output is decomposed left to right: at each position the longest prefix
of the remaining output that occurs anywhere in the input becomes an
input-derived segment (with every occurrence start recorded); characters that
occur nowhere in the input are accumulated into one constant segment. The
decomposition is deterministic, covers the output exactly, and is the shared
substrate all five ambiguity detectors evaluate on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .annotations import Example

DERIVED = "input-derived"
CONSTANT = "constant"


@dataclass(frozen=True)
class Segment:
    text: str
    kind: str
    output_span: tuple[int, int]
    occurrences: tuple[int, ...]


@dataclass(frozen=True)
class SegmentAlignment:
    """Per-sample segment lists plus the cross-sample alignment verdict.

    aligned is true only when every sample has the same segment count and, at
    each index, the same kind (constant segments additionally need identical
    text). Detectors must report all-false on unaligned examples.
    """

    per_sample: tuple[tuple[Segment, ...], ...]
    k: int
    aligned: bool
    reason: Optional[str] = None


def find_occurrences(haystack: str, needle: str) -> tuple[int, ...]:
    """All start positions of needle in haystack, overlapping matches included."""
    if not needle:
        return ()
    return tuple(
        i
        for i in range(len(haystack) - len(needle) + 1)
        if haystack.startswith(needle, i)
    )


def segment_output(input_text: str, output_text: str) -> list[Segment]:
    """Greedy longest-match decomposition of one output against its input."""
    if not input_text or not output_text:
        raise ValueError("input and output must be non-empty")
    segments: list[Segment] = []
    pos = 0
    m = len(output_text)
    while pos < m:
        matched = None
        for length in range(m - pos, 0, -1):
            candidate = output_text[pos : pos + length]
            if candidate in input_text:
                matched = candidate
                break
        if matched is not None:
            end = pos + len(matched)
            segments.append(
                Segment(
                    matched,
                    DERIVED,
                    (pos, end),
                    find_occurrences(input_text, matched),
                )
            )
            pos = end
        else:
            start = pos
            while pos < m and output_text[pos] not in input_text:
                pos += 1
            segments.append(
                Segment(output_text[start:pos], CONSTANT, (start, pos), ())
            )
    return segments


def align_example(example: Example) -> SegmentAlignment:
    """Segment every sample and check index-wise agreement across samples."""
    per_sample = tuple(
        tuple(segment_output(s.input, s.output)) for s in example.samples
    )
    counts = sorted({len(segs) for segs in per_sample})
    if len(counts) > 1:
        return SegmentAlignment(
            per_sample,
            0,
            False,
            f"segment counts differ across samples: {counts}",
        )
    k = counts[0]
    for j in range(k):
        column = [segs[j] for segs in per_sample]
        kinds = {seg.kind for seg in column}
        if len(kinds) > 1:
            return SegmentAlignment(
                per_sample,
                k,
                False,
                f"segment {j} mixes input-derived and constant kinds",
            )
        if column[0].kind == CONSTANT and len({seg.text for seg in column}) > 1:
            return SegmentAlignment(
                per_sample,
                k,
                False,
                f"constant segment {j} has differing texts across samples",
            )
    return SegmentAlignment(per_sample, k, True)
