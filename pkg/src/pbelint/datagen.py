"""Synthetic dataset generation with oracle self-labeling.

Each example plants K output segments inside filler-and-delimiter scaffolding:
the input is the concatenation of ``filler delim segment delim filler`` parts
and the output is the concatenation of the planted segments. One target slot
holds the designated attribute fixed across samples (equal lengths, equal
start position, identical text, one shared token class, or a second planted
occurrence). Every record is labeled by the exhaustive oracle on all five
properties, and candidates whose oracle label misses the target are rejected
and redrawn, so stored labels are reproducible by construction.

Negative generation varies all five attributes at once; by default only
records the oracle scores all-false survive, or, with ``negative_for`` set,
records where that one property is false.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from typing import Optional

from .annotations import PROPERTIES, DatasetRecord, Example, PropertyLabels, Sample
from .detectors import ORACLE_MAX_INPUT, ORACLE_MAX_OUTPUT, oracle_detect_all

NEGATIVE = "negative"
DELIMITERS = "#@_-. "
ALNUM = string.ascii_letters + string.digits

_FILLER_LEN = (1, 3)
_STALL_MIN_ATTEMPTS = 500
_STALL_ACCEPT_RATE = 0.01


class GenerationStallError(RuntimeError):
    """The configuration rejects more than 99% of candidates."""


@dataclass(frozen=True)
class GenConfig:
    property: str
    examples: int
    samples_per_example: int = 3
    segment_len: tuple[int, int] = (2, 9)
    max_segments: int = 4
    seed: int = 0
    charset: str = ALNUM
    negative_for: Optional[str] = None

    def __post_init__(self):
        if self.property not in PROPERTIES + (NEGATIVE,):
            raise ValueError(f"unknown property {self.property!r}")
        if self.examples < 1:
            raise ValueError("examples must be >= 1")
        if self.samples_per_example < 2:
            raise ValueError("samples_per_example must be >= 2")
        lo, hi = self.segment_len
        if not (1 <= lo <= hi <= 32):
            raise ValueError("segment_len must be within [1, 32]")
        if self.max_segments < 1:
            raise ValueError("max_segments must be >= 1")
        if self.negative_for is not None and self.negative_for not in PROPERTIES:
            raise ValueError(f"unknown negative_for property {self.negative_for!r}")
        if not self.charset:
            raise ValueError("charset must be non-empty")


@dataclass
class GenStats:
    produced: int
    rejected: int
    positive_rates: dict[str, float]

    def as_dict(self) -> dict:
        return {
            "produced": self.produced,
            "rejected": self.rejected,
            "positive_rates": self.positive_rates,
        }


def _rand_text(rng: random.Random, charset: str, length: int) -> str:
    return "".join(rng.choice(charset) for _ in range(length))


def _filler(rng: random.Random, charset: str) -> str:
    return _rand_text(rng, charset, rng.randint(*_FILLER_LEN))


def _draw_lengths(
    rng: random.Random, cfg: GenConfig, slots: int, equal_slot: Optional[int]
):
    """Per-slot segment lengths for each sample, fitting the oracle output bound."""
    for _ in range(64):
        shared = rng.randint(*cfg.segment_len)
        lengths = []
        for _ in range(cfg.samples_per_example):
            row = [
                shared if j == equal_slot else rng.randint(*cfg.segment_len)
                for j in range(slots)
            ]
            lengths.append(row)
        if all(sum(row) <= ORACLE_MAX_OUTPUT for row in lengths):
            return lengths
    return None


def _alnum_charset(cfg: GenConfig) -> str:
    kept = "".join(c for c in cfg.charset if c.isalnum())
    return kept or ALNUM


def _build_positive(rng: random.Random, cfg: GenConfig) -> Optional[Example]:
    target = cfg.property
    slots = rng.randint(1, cfg.max_segments)
    # The planted equal start position is only controllable for the first slot.
    target_slot = 0 if target == "exact_position" else rng.randrange(slots)
    content = _alnum_charset(cfg)

    lengths = _draw_lengths(
        rng,
        cfg,
        slots,
        target_slot if target in ("similar_length", "exact_match") else None,
    )
    if lengths is None:
        return None

    texts: list[list[str]] = []
    if target == "token_type":
        classes = [
            cls
            for cls in (
                "".join(c for c in content if c.isalpha()),
                "".join(c for c in content if c.isdigit()),
            )
            if cls
        ]
        if not classes:
            return None
        token_charset = rng.choice(classes)
    shared_text = None
    if target == "exact_match":
        shared_text = _rand_text(rng, content, lengths[0][target_slot])
    front_len = rng.randint(*_FILLER_LEN)

    for i in range(cfg.samples_per_example):
        row = []
        for j in range(slots):
            if j == target_slot:
                if target == "exact_match":
                    row.append(shared_text)
                elif target == "token_type":
                    row.append(_rand_text(rng, token_charset, lengths[i][j]))
                else:
                    row.append(_rand_text(rng, content, lengths[i][j]))
            else:
                row.append(_rand_text(rng, content, lengths[i][j]))
        texts.append(row)

    delims = [rng.choice(DELIMITERS) for _ in range(slots)]
    samples = []
    for i in range(cfg.samples_per_example):
        parts = []
        for j in range(slots):
            d = delims[j]
            if j == target_slot and target == "exact_position":
                front = _rand_text(rng, content, front_len)
            else:
                front = _filler(rng, content)
            piece = front + d + texts[i][j] + d
            if j == target_slot and target == "repeating":
                piece += _filler(rng, content) + d + texts[i][j] + d
            piece += _filler(rng, content)
            parts.append(piece)
        input_text = "".join(parts)
        output_text = "".join(texts[i])
        if len(input_text) > ORACLE_MAX_INPUT:
            return None
        samples.append(Sample(input_text, output_text))
    return Example("pending", tuple(samples))


def _distinct_lengths(rng: random.Random, cfg: GenConfig, slots: int):
    """Length rows where no slot has equal lengths across all samples."""
    lo, hi = cfg.segment_len
    for _ in range(64):
        lengths = [
            [rng.randint(lo, hi) for _ in range(slots)]
            for _ in range(cfg.samples_per_example)
        ]
        if lo != hi:
            collide = any(
                len({lengths[i][j] for i in range(cfg.samples_per_example)}) == 1
                for j in range(slots)
            )
            if collide:
                continue
        if all(sum(row) <= ORACLE_MAX_OUTPUT for row in lengths):
            return lengths
    return None


def _mixed_class_text(rng: random.Random, content: str, length: int, flavor: int) -> str:
    """Segment text that avoids a single shared token class across samples."""
    letters = [c for c in content if c.isalpha()] or list(string.ascii_letters)
    digits = [c for c in content if c.isdigit()] or list(string.digits)
    if length == 1:
        return rng.choice(letters if flavor % 2 == 0 else digits)
    chars = [rng.choice(content) for _ in range(length)]
    chars[0] = rng.choice(letters)
    chars[1] = rng.choice(digits)
    return "".join(chars)


def _build_negative(rng: random.Random, cfg: GenConfig) -> Optional[Example]:
    slots = rng.randint(1, cfg.max_segments)
    content = _alnum_charset(cfg)
    lengths = _distinct_lengths(rng, cfg, slots)
    if lengths is None:
        return None
    delims = [rng.choice(DELIMITERS) for _ in range(slots)]
    samples = []
    front_lens: set[int] = set()
    for i in range(cfg.samples_per_example):
        parts = []
        row_texts = []
        for j in range(slots):
            text = _mixed_class_text(rng, content, lengths[i][j], i)
            row_texts.append(text)
            if j == 0:
                length = rng.randint(*_FILLER_LEN)
                while length in front_lens and len(front_lens) < _FILLER_LEN[1]:
                    length = rng.randint(*_FILLER_LEN)
                front_lens.add(length)
                front = _rand_text(rng, content, length)
            else:
                front = _filler(rng, content)
            parts.append(front + delims[j] + text + delims[j] + _filler(rng, content))
        input_text = "".join(parts)
        output_text = "".join(row_texts)
        if len(input_text) > ORACLE_MAX_INPUT:
            return None
        samples.append(Sample(input_text, output_text))
    return Example("pending", tuple(samples))


def _keep(labels: PropertyLabels, cfg: GenConfig) -> bool:
    if cfg.property != NEGATIVE:
        return getattr(labels, cfg.property)
    if cfg.negative_for is not None:
        return not getattr(labels, cfg.negative_for)
    return not any(labels.as_dict().values())


def generate(cfg: GenConfig) -> tuple[list[DatasetRecord], GenStats]:
    """Generate cfg.examples oracle-labeled records; deterministic given seed."""
    rng = random.Random(cfg.seed)
    build = _build_negative if cfg.property == NEGATIVE else _build_positive
    records: list[DatasetRecord] = []
    attempts = 0
    rejected = 0
    while len(records) < cfg.examples:
        attempts += 1
        if (
            attempts >= _STALL_MIN_ATTEMPTS
            and len(records) / attempts < _STALL_ACCEPT_RATE
        ):
            raise GenerationStallError(
                f"rejected {rejected} of {attempts} candidates for "
                f"property {cfg.property!r}; configuration looks unsatisfiable"
            )
        candidate = build(rng, cfg)
        if candidate is None:
            rejected += 1
            continue
        labels = oracle_detect_all(candidate)
        if not _keep(labels, cfg):
            rejected += 1
            continue
        example = Example(
            f"{cfg.property}-{cfg.seed}-{len(records):06d}", candidate.samples
        )
        records.append(DatasetRecord(example, labels))
    rates = {
        name: sum(getattr(r.labels, name) for r in records) / len(records)
        for name in PROPERTIES
    }
    return records, GenStats(len(records), rejected, rates)


def generate_negative(cfg: GenConfig) -> list[DatasetRecord]:
    """Negative-mode records (see module docstring for the keep rule)."""
    if cfg.property != NEGATIVE:
        raise ValueError("generate_negative requires property='negative'")
    records, _ = generate(cfg)
    return records
