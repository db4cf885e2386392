"""Multi-task attention classifier for PBE annotation ambiguity."""

from .encoding import (
    AmbiguityDataset,
    EncodingError,
    PROPERTIES,
    encode_example,
    load_records,
    scan_lengths,
)
from .model import AmbiguityClassifier, ModelConfig, VARIANTS, task_losses, weighted_total
from .train import TrainRun, load_checkpoint, predict_records, save_checkpoint, train

__all__ = [
    "AmbiguityDataset",
    "EncodingError",
    "PROPERTIES",
    "encode_example",
    "load_records",
    "scan_lengths",
    "AmbiguityClassifier",
    "ModelConfig",
    "VARIANTS",
    "task_losses",
    "weighted_total",
    "TrainRun",
    "train",
    "predict_records",
    "save_checkpoint",
    "load_checkpoint",
]
