"""Character-level encoding of JSONL datasets into padded index tensors.

The vocabulary is the fixed printable-ASCII set (letters, digits, punctuation,
space) shared between inputs and outputs, with <pad> at index 0. Maximum
input/output lengths are scanned from the training corpus and frozen into the
checkpoint; longer strings at prediction time are an explicit error, never a
silent truncation.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from typing import Optional, Sequence

import torch

PAD_INDEX = 0
VOCAB = ["<pad>"] + sorted(string.ascii_letters + string.digits + string.punctuation + " ")
CHAR_TO_INDEX = {ch: i for i, ch in enumerate(VOCAB)}

PROPERTIES = (
    "similar_length",
    "exact_position",
    "exact_match",
    "token_type",
    "repeating",
)


class EncodingError(ValueError):
    pass


@dataclass
class Record:
    id: str
    inputs: list[str]
    outputs: list[str]
    labels: Optional[list[int]]  # five 0/1 values, property order


def load_records(path: str, require_labels: bool = False) -> list[Record]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            labels_obj = obj.get("labels")
            labels = None
            if labels_obj is not None:
                labels = [int(bool(labels_obj[name])) for name in PROPERTIES]
            elif require_labels:
                raise EncodingError(f"line {line_no}: record {obj.get('id')!r} is unlabeled")
            records.append(Record(obj["id"], obj["inputs"], obj["outputs"], labels))
    return records


def scan_lengths(records: Sequence[Record]) -> tuple[int, int]:
    """(n, m): maximum input and output length over the corpus."""
    n = max(len(text) for r in records for text in r.inputs)
    m = max(len(text) for r in records for text in r.outputs)
    return n, m


def encode_text(text: str, width: int) -> list[int]:
    if len(text) > width:
        raise EncodingError(
            f"string of length {len(text)} exceeds the model's maximum {width}"
        )
    indices = []
    for ch in text:
        if ch not in CHAR_TO_INDEX:
            raise EncodingError(f"character {ch!r} outside the printable-ASCII vocabulary")
        indices.append(CHAR_TO_INDEX[ch])
    return indices + [PAD_INDEX] * (width - len(text))


def encode_example(
    inputs: Sequence[str], outputs: Sequence[str], l: int, n: int, m: int
) -> tuple[torch.Tensor, torch.Tensor]:
    """Index tensors of shape (l, n) and (l, m) for one example."""
    if len(inputs) != l or len(outputs) != l:
        raise EncodingError(f"expected {l} samples, got {len(inputs)}")
    input_ids = torch.tensor([encode_text(t, n) for t in inputs], dtype=torch.long)
    output_ids = torch.tensor([encode_text(t, m) for t in outputs], dtype=torch.long)
    return input_ids, output_ids


def decode_indices(indices: Sequence[int]) -> str:
    return "".join(VOCAB[i] for i in indices if i != PAD_INDEX)


class AmbiguityDataset(torch.utils.data.Dataset):
    """Tensor dataset over loaded records; labels optional (prediction mode)."""

    def __init__(self, records: Sequence[Record], l: int, n: int, m: int):
        self.records = list(records)
        self.l, self.n, self.m = l, n, m

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, index: int):
        record = self.records[index]
        input_ids, output_ids = encode_example(
            record.inputs, record.outputs, self.l, self.n, self.m
        )
        labels = (
            torch.tensor(record.labels, dtype=torch.long)
            if record.labels is not None
            else torch.zeros(len(PROPERTIES), dtype=torch.long)
        )
        return input_ids, output_ids, labels
