import json

import pytest

from pbelint.cli import main
from pbelint.annotations import (
    DatasetRecord,
    Example,
    PropertyLabels,
    Sample,
    read_predictions,
    write_dataset,
)

from conftest import REFERENCE_ROWS, make_example


@pytest.fixture
def reference_file(tmp_path):
    path = tmp_path / "rows.jsonl"
    records = [
        DatasetRecord(make_example(name, pairs))
        for name, pairs in REFERENCE_ROWS.items()
    ]
    write_dataset(records, path)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- lint ---------------------------------------------------------------------


def test_lint_flags_named_properties(reference_file, capsys):
    code, out, _ = run(capsys, "lint", reference_file)
    assert code == 0
    reports = [json.loads(line) for line in out.splitlines()]
    assert len(reports) == 5
    for report in reports:
        assert report["labels"][report["id"]] is True


def test_lint_unlabeled_valid_file_has_no_diagnostics(reference_file, capsys):
    code, out, _ = run(capsys, "lint", reference_file)
    assert code == 0
    for line in out.splitlines():
        assert json.loads(line)["diagnostics"] == []


def test_lint_text_format(reference_file, capsys):
    code, out, _ = run(capsys, "lint", reference_file, "--format", "text")
    assert code == 0
    assert "similar_length: YES" in out
    assert "'123' | '535'" in out


def test_lint_rejects_single_sample_example(tmp_path, capsys):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"id":"lonely","inputs":["ab"],"outputs":["a"],"labels":null}\n')
    code, _, err = run(capsys, "lint", path)
    assert code == 1
    assert "lonely" in err


def test_lint_rejects_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.jsonl"
    path.write_text("{not json\n")
    code, _, err = run(capsys, "lint", path)
    assert code == 1
    assert "line 1" in err


def test_lint_predict_file_round_trips(reference_file, tmp_path, capsys):
    pred_path = tmp_path / "pred.jsonl"
    code, _, _ = run(capsys, "lint", reference_file, "--predict-file", pred_path)
    assert code == 0
    predictions = read_predictions(pred_path)
    assert [p.id for p in predictions] == list(REFERENCE_ROWS)
    for prediction in predictions:
        assert getattr(prediction.pred, prediction.id) is True


def test_lint_figure(reference_file, tmp_path, capsys):
    figure = tmp_path / "lint.png"
    code, _, _ = run(capsys, "lint", reference_file, "--figure", figure)
    assert code == 0
    assert figure.stat().st_size > 0


def test_lint_threaded_output_matches_sequential(reference_file, capsys, monkeypatch):
    code, sequential, _ = run(capsys, "lint", reference_file)
    monkeypatch.setenv("PBELINT_THREADS", "4")
    code2, threaded, _ = run(capsys, "lint", reference_file)
    assert code == code2 == 0
    assert threaded == sequential


# --- synth ---------------------------------------------------------------------


def test_synth_divergence_case_study(tmp_path, capsys):
    data = tmp_path / "train.jsonl"
    write_dataset(
        [
            DatasetRecord(
                make_example(
                    "ex1", [("ABCD_12", "12"), ("BDJ_535", "535"), ("GE_443", "443")]
                )
            )
        ],
        data,
    )
    unseen = tmp_path / "unseen.txt"
    unseen.write_text("B_DS2345\n")
    code, out, _ = run(capsys, "synth", data, "--unseen", unseen)
    assert code == 0
    report = json.loads(out)
    assert report["id"] == "ex1"
    assert report["programs"]
    outs = report["divergence"]["B_DS2345"]
    assert "2345" in outs and "DS2345" in outs
    assert report["intent_counts"]["B_DS2345"] >= 2


def test_synth_without_unseen_has_empty_divergence(tmp_path, capsys):
    data = tmp_path / "train.jsonl"
    write_dataset(
        [DatasetRecord(make_example("e", [("ab_c", "c"), ("xy_z", "z")]))], data
    )
    code, out, _ = run(capsys, "synth", data)
    assert code == 0
    report = json.loads(out)
    assert report["programs"]
    assert report["divergence"] == {}


def test_synth_deterministic_stdout(tmp_path, capsys):
    data = tmp_path / "train.jsonl"
    write_dataset(
        [DatasetRecord(make_example("e", [("ab_c", "c"), ("xy_z", "z")]))], data
    )
    _, first, _ = run(capsys, "synth", data)
    _, second, _ = run(capsys, "synth", data)
    assert first == second


# --- gen -----------------------------------------------------------------------


def test_gen_writes_reproducible_dataset(tmp_path, capsys):
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    code1, _, err1 = run(
        capsys, "gen", "--property", "similar_length", "--count", 10,
        "--seed", 1, "--out", out1,
    )
    code2, _, _ = run(
        capsys, "gen", "--property", "similar_length", "--count", 10,
        "--seed", 1, "--out", out2,
    )
    assert code1 == code2 == 0
    assert out1.read_bytes() == out2.read_bytes()
    stats = json.loads(err1.splitlines()[-1])
    assert stats["produced"] == 10


def test_gen_negative_mode(tmp_path, capsys):
    out = tmp_path / "neg.jsonl"
    code, _, _ = run(
        capsys, "gen", "--property", "negative", "--count", 10, "--seed", 2,
        "--out", out,
    )
    assert code == 0
    from pbelint.annotations import read_dataset

    for record in read_dataset(out):
        assert record.labels == PropertyLabels.all_false()


def test_gen_zero_count_is_usage_error(tmp_path, capsys):
    code, _, err = run(
        capsys, "gen", "--property", "repeating", "--count", 0,
        "--out", tmp_path / "x.jsonl",
    )
    assert code == 1
    assert "count" in err


def test_gen_stall_exits_2(tmp_path, capsys, monkeypatch):
    import pbelint.cli as cli_mod
    from pbelint.datagen import GenerationStallError

    def stalling(cfg):
        raise GenerationStallError("stalled")

    monkeypatch.setattr(cli_mod, "generate", stalling)
    code, _, err = run(
        capsys, "gen", "--property", "repeating", "--count", 1,
        "--out", tmp_path / "x.jsonl",
    )
    assert code == 2
    assert "stalled" in err


def test_eval_perfect_predictions(tmp_path, capsys):
    gold = tmp_path / "gold.jsonl"
    pred = tmp_path / "pred.jsonl"
    code, _, _ = run(
        capsys, "gen", "--property", "token_type", "--count", 8, "--seed", 4,
        "--out", gold,
    )
    assert code == 0
    code, _, _ = run(capsys, "lint", gold, "--predict-file", pred)
    assert code == 0
    code, out, _ = run(capsys, "eval", "--gold", gold, "--pred", pred)
    assert code == 0
    scores = json.loads(out)
    for s in scores.values():
        assert s["accuracy"] == 1.0


def test_eval_missing_id_exits_1(tmp_path, capsys):
    gold = tmp_path / "gold.jsonl"
    write_dataset(
        [
            DatasetRecord(
                Example("a", (Sample("xy", "x"), Sample("zw", "z"))),
                PropertyLabels.all_false(),
            ),
            DatasetRecord(
                Example("b", (Sample("xy", "x"), Sample("zw", "z"))),
                PropertyLabels.all_false(),
            ),
        ],
        gold,
    )
    pred = tmp_path / "pred.jsonl"
    pred.write_text(
        json.dumps({"id": "a", "pred": PropertyLabels.all_false().as_dict()}) + "\n"
    )
    code, _, err = run(capsys, "eval", "--gold", gold, "--pred", pred)
    assert code == 1
    assert "no prediction" in err


def test_eval_figure(tmp_path, capsys):
    gold = tmp_path / "gold.jsonl"
    pred = tmp_path / "pred.jsonl"
    run(capsys, "gen", "--property", "repeating", "--count", 6, "--seed", 4,
        "--out", gold)
    run(capsys, "lint", gold, "--predict-file", pred)
    figure = tmp_path / "scores.png"
    code, _, _ = run(
        capsys, "eval", "--gold", gold, "--pred", pred, "--figure", figure
    )
    assert code == 0
    assert figure.stat().st_size > 0


def test_unknown_subcommand_exits_1(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 1
