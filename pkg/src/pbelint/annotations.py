"""Core data model: samples, examples, five-way labels, and the JSONL file formats.

One record schema serves both workflows: user-provided lint input carries
``"labels": null``, generated training data carries the five booleans.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

PROPERTIES = (
    "similar_length",
    "exact_position",
    "exact_match",
    "token_type",
    "repeating",
)

# Uppercase/lowercase letters, digits, printable specials, and space.
PRINTABLE_CHARS = frozenset(
    string.ascii_letters + string.digits + string.punctuation + " "
)


class DatasetFormatError(ValueError):
    """A dataset/prediction file violates the JSONL schema."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(ValueError):
    """A record violates a type invariant (raised on strict paths such as writes)."""


@dataclass(frozen=True)
class Sample:
    """One input/output string pair."""

    input: str
    output: str


@dataclass(frozen=True)
class Example:
    """An ordered group of samples expressing one intended transformation."""

    id: str
    samples: tuple[Sample, ...]

    @property
    def inputs(self) -> list[str]:
        return [s.input for s in self.samples]

    @property
    def outputs(self) -> list[str]:
        return [s.output for s in self.samples]


@dataclass(frozen=True)
class PropertyLabels:
    similar_length: bool
    exact_position: bool
    exact_match: bool
    token_type: bool
    repeating: bool

    def as_dict(self) -> dict[str, bool]:
        return {name: getattr(self, name) for name in PROPERTIES}

    @classmethod
    def from_dict(cls, d: dict) -> "PropertyLabels":
        missing = [name for name in PROPERTIES if name not in d]
        if missing:
            raise ValueError(f"labels missing keys: {missing}")
        extra = [k for k in d if k not in PROPERTIES]
        if extra:
            raise ValueError(f"labels has unknown keys: {extra}")
        values = {}
        for name in PROPERTIES:
            v = d[name]
            if not isinstance(v, bool):
                raise ValueError(f"label {name!r} must be a boolean, got {v!r}")
            values[name] = v
        return cls(**values)

    @classmethod
    def all_false(cls) -> "PropertyLabels":
        return cls(False, False, False, False, False)


@dataclass(frozen=True)
class DatasetRecord:
    example: Example
    labels: Optional[PropertyLabels] = None


@dataclass(frozen=True)
class PredictionRecord:
    id: str
    pred: PropertyLabels


@dataclass(frozen=True)
class ValidationIssue:
    """A single invariant violation; ``warning`` issues do not abort linting."""

    example_id: str
    message: str
    warning: bool = False


def validate_example(example: Example) -> list[ValidationIssue]:
    """Return all invariant violations of one example (empty list means valid).

    Character-set violations are warnings: detection accepts arbitrary text,
    but generation and strict writers reject it.
    """
    issues: list[ValidationIssue] = []
    if not example.id:
        issues.append(ValidationIssue(example.id, "empty example id"))
    if len(example.samples) < 2:
        issues.append(
            ValidationIssue(example.id, "need at least 2 samples for detection")
        )
    for i, sample in enumerate(example.samples):
        if not sample.input:
            issues.append(ValidationIssue(example.id, f"sample {i}: empty input"))
        if not sample.output:
            issues.append(ValidationIssue(example.id, f"sample {i}: empty output"))
        for label, text in (("input", sample.input), ("output", sample.output)):
            bad = sorted({c for c in text if c not in PRINTABLE_CHARS})
            if bad:
                issues.append(
                    ValidationIssue(
                        example.id,
                        f"sample {i}: {label} contains non-printable characters {bad}",
                        warning=True,
                    )
                )
    return issues


def _record_from_json(obj: dict, line: int) -> DatasetRecord:
    if not isinstance(obj, dict):
        raise DatasetFormatError("record must be a JSON object", line)
    for key in ("id", "inputs", "outputs"):
        if key not in obj:
            raise DatasetFormatError(f"record missing {key!r}", line)
    if not isinstance(obj["id"], str):
        raise DatasetFormatError("'id' must be a string", line)
    inputs, outputs = obj["inputs"], obj["outputs"]
    for key, arr in (("inputs", inputs), ("outputs", outputs)):
        if not isinstance(arr, list) or not all(isinstance(x, str) for x in arr):
            raise DatasetFormatError(f"{key!r} must be an array of strings", line)
    if len(inputs) != len(outputs):
        raise DatasetFormatError(
            f"'inputs' has {len(inputs)} entries but 'outputs' has {len(outputs)}",
            line,
        )
    labels_obj = obj.get("labels")
    labels = None
    if labels_obj is not None:
        if not isinstance(labels_obj, dict):
            raise DatasetFormatError("'labels' must be an object or null", line)
        try:
            labels = PropertyLabels.from_dict(labels_obj)
        except ValueError as exc:
            raise DatasetFormatError(str(exc), line) from exc
    samples = tuple(Sample(i, o) for i, o in zip(inputs, outputs))
    return DatasetRecord(Example(obj["id"], samples), labels)


def _record_to_json(record: DatasetRecord) -> dict:
    return {
        "id": record.example.id,
        "inputs": record.example.inputs,
        "outputs": record.example.outputs,
        "labels": record.labels.as_dict() if record.labels is not None else None,
    }


def read_dataset(path: str | Path) -> list[DatasetRecord]:
    """Read a JSONL dataset, preserving file order.

    Raises DatasetFormatError naming the offending line on malformed input,
    and ValidationError on duplicate ids.
    """
    records: list[DatasetRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetFormatError(f"invalid JSON: {exc.msg}", line_no) from exc
            record = _record_from_json(obj, line_no)
            if record.example.id in seen:
                raise ValidationError(
                    f"line {line_no}: duplicate example id {record.example.id!r}"
                )
            seen.add(record.example.id)
            records.append(record)
    return records


def write_dataset(records: Iterable[DatasetRecord], path: str | Path) -> None:
    """Write records as JSONL. Strict: any invariant violation aborts the write."""
    records = list(records)
    seen: set[str] = set()
    for record in records:
        issues = validate_example(record.example)
        if issues:
            raise ValidationError(
                f"example {record.example.id!r}: "
                + "; ".join(i.message for i in issues)
            )
        if record.example.id in seen:
            raise ValidationError(f"duplicate example id {record.example.id!r}")
        seen.add(record.example.id)
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(_record_to_json(record)) + "\n")


def read_predictions(path: str | Path) -> list[PredictionRecord]:
    """Read a prediction JSONL file ({"id": ..., "pred": {five booleans}})."""
    records: list[PredictionRecord] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetFormatError(f"invalid JSON: {exc.msg}", line_no) from exc
            if not isinstance(obj, dict) or "id" not in obj or "pred" not in obj:
                raise DatasetFormatError("record must have 'id' and 'pred'", line_no)
            if not isinstance(obj["id"], str):
                raise DatasetFormatError("'id' must be a string", line_no)
            try:
                pred = PropertyLabels.from_dict(obj["pred"])
            except (TypeError, ValueError) as exc:
                raise DatasetFormatError(str(exc), line_no) from exc
            records.append(PredictionRecord(obj["id"], pred))
    return records


def write_predictions(records: Iterable[PredictionRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(
                json.dumps({"id": record.id, "pred": record.pred.as_dict()}) + "\n"
            )
