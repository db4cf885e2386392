"""Ambiguity linting and program-divergence tooling for PBE string transformations."""

from .annotations import (
    PROPERTIES,
    DatasetRecord,
    Example,
    PredictionRecord,
    PropertyLabels,
    Sample,
    read_dataset,
    read_predictions,
    validate_example,
    write_dataset,
    write_predictions,
)
from .alignment import Segment, SegmentAlignment, align_example, segment_output
from .detectors import AmbiguityReport, Witness, detect_all, oracle_detect_all
from .dsl import Program, evaluate, format_program, parse_program
from .synthesizer import (
    DivergenceReport,
    SynthesisConfig,
    check_consistency,
    divergence,
    synthesize,
)
from .datagen import GenConfig, GenStats, generate, generate_negative
from .metrics import PropertyScore, score

__all__ = [
    "PROPERTIES",
    "Sample",
    "Example",
    "PropertyLabels",
    "DatasetRecord",
    "PredictionRecord",
    "read_dataset",
    "write_dataset",
    "read_predictions",
    "write_predictions",
    "validate_example",
    "Segment",
    "SegmentAlignment",
    "segment_output",
    "align_example",
    "AmbiguityReport",
    "Witness",
    "detect_all",
    "oracle_detect_all",
    "Program",
    "evaluate",
    "parse_program",
    "format_program",
    "SynthesisConfig",
    "DivergenceReport",
    "synthesize",
    "check_consistency",
    "divergence",
    "GenConfig",
    "GenStats",
    "generate",
    "generate_negative",
    "PropertyScore",
    "score",
]
