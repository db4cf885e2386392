"""Secondary acceptance: desk-scale training and ablation smoke tests.

The desk-scale criterion (5,000 examples/property plus matched negatives, 10
epochs, accuracy >= 0.90 on a held-out 1,000/property split) takes a few hours
on one CPU core, so it only runs when PBENN_ACCEPTANCE=1 is set:

    PBENN_ACCEPTANCE=1 pytest tests/test_acceptance.py -v -s

The ablation smoke test always runs, at micro scale.
"""

import json
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import pbelint

PROPERTIES = (
    "similar_length",
    "exact_position",
    "exact_match",
    "token_type",
    "repeating",
)


def pbenn(*argv):
    return subprocess.run(
        [sys.executable, "-m", "pbenn.cli", *map(str, argv)],
        capture_output=True,
        text=True,
    )


def build_corpus(root: Path, name: str, per_property: int, seed_base: int) -> Path:
    parts = []
    for i, prop in enumerate(PROPERTIES + ("negative",)):
        out = root / f"{name}-{prop}.jsonl"
        result = pbelint(
            "gen", "--property", prop, "--count", per_property,
            "--seed", seed_base + i, "--segment-len", 2, 4, "--max-segments", 1,
            "--out", out,
        )
        assert result.returncode == 0, result.stderr
        parts.append(out.read_text())
    path = root / f"{name}.jsonl"
    path.write_text("".join(parts))
    return path


def test_ablation_variants_smoke(small_corpus, tmp_path):
    """no_cnn / no_attention / gru train without error and predict valid schema."""
    for variant in ("no_cnn", "no_attention", "gru"):
        out = tmp_path / variant
        result = pbenn(
            "train", "--data", small_corpus, "--val-data", small_corpus,
            "--variant", variant, "--seed", 1, "--epochs", 2,
            "--batch-size", 16, "--hidden", 32, "--out", out,
        )
        assert result.returncode == 0, result.stderr
        check = pbelint(
            "eval", "--gold", small_corpus, "--pred", out / "predictions.jsonl"
        )
        assert check.returncode == 0, check.stderr
        print(f"ACCEPTANCE PASS: ablation {variant} trains and predicts valid schema")


@pytest.mark.skipif(
    os.environ.get("PBENN_ACCEPTANCE") != "1",
    reason="desk-scale training takes hours; set PBENN_ACCEPTANCE=1 to run",
)
def test_desk_scale_training(tmp_path):
    """Full variant at desk scale reaches >= 0.90 accuracy per property."""
    started = time.monotonic()
    train_path = build_corpus(tmp_path, "train", per_property=5000, seed_base=100)
    val_path = build_corpus(tmp_path, "val", per_property=1000, seed_base=200)
    print(
        f"corpus ready ({time.monotonic() - started:.0f}s); training 10 epochs...",
        flush=True,
    )
    out = tmp_path / "full"
    result = pbenn(
        "train", "--data", train_path, "--val-data", val_path,
        "--variant", "full", "--seed", 0, "--epochs", 10, "--batch-size", 32,
        "--out", out,
    )
    sys.stderr.write(result.stderr[-4000:])
    assert result.returncode == 0, result.stderr[-2000:]

    check = pbelint("eval", "--gold", val_path, "--pred", out / "predictions.jsonl")
    assert check.returncode == 0, check.stderr
    scores = json.loads(check.stdout)
    elapsed = time.monotonic() - started
    for name in PROPERTIES:
        accuracy = scores[name]["accuracy"]
        status = "PASS" if accuracy >= 0.90 else "FAIL"
        print(f"ACCEPTANCE {status}: desk-scale {name} accuracy {accuracy:.4f}")
    print(f"desk-scale run took {elapsed:.0f}s")
    assert all(scores[name]["accuracy"] >= 0.90 for name in PROPERTIES), {
        name: scores[name]["accuracy"] for name in PROPERTIES
    }
