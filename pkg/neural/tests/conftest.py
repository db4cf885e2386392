import subprocess

import pytest


def pbelint(*argv):
    """Invoke the primary toolkit through its CLI (the only interface we use)."""
    return subprocess.run(
        ["pbelint", *map(str, argv)], capture_output=True, text=True
    )


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """A small labeled corpus: 30 per property plus 30 all-false negatives."""
    root = tmp_path_factory.mktemp("corpus")
    parts = []
    properties = (
        "similar_length",
        "exact_position",
        "exact_match",
        "token_type",
        "repeating",
        "negative",
    )
    for i, name in enumerate(properties):
        out = root / f"{name}.jsonl"
        result = pbelint(
            "gen", "--property", name, "--count", 30, "--seed", 900 + i,
            "--segment-len", 2, 4, "--max-segments", 1, "--out", out,
        )
        assert result.returncode == 0, result.stderr
        parts.append(out.read_text())
    path = root / "train.jsonl"
    path.write_text("".join(parts))
    return path
