"""pbelint command line: lint, synth, gen, eval.

Reports go to stdout (JSON unless --format text); statistics and diagnostics
go to stderr. Exit codes: 0 success, 1 validation/parse errors, 2 internal
errors. PBELINT_THREADS caps per-example parallelism; output order always
matches input order.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

from .annotations import (
    DatasetFormatError,
    DatasetRecord,
    PredictionRecord,
    ValidationError,
    read_dataset,
    read_predictions,
    validate_example,
    write_dataset,
    write_predictions,
)
from .datagen import NEGATIVE, GenConfig, GenerationStallError, generate
from .detectors import AmbiguityReport, Witness, detect_all
from .dsl import format_program
from .metrics import ScoringError, score
from .synthesizer import SynthesisConfig, divergence, synthesize

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INTERNAL = 2


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we want exit 1
        raise UsageError(message)


def _thread_count() -> int:
    raw = os.environ.get("PBELINT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"PBELINT_THREADS must be an integer, got {raw!r}")


def _ordered_map(fn: Callable, items: Sequence) -> list:
    threads = _thread_count()
    if threads == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


_TEXT_TEMPLATES = {
    "similar_length": (
        "segment #{j} ({texts}) always has {n} characters; a fixed-width rule "
        "and a pattern rule both fit"
    ),
    "exact_position": (
        "segment #{j} ({texts}) can always be taken from the same input "
        "position ({pos}); a fixed-position rule and a pattern rule both fit"
    ),
    "exact_match": (
        "segment #{j} is always the literal '{text}', which also occurs in "
        "every input; a constant and an extraction both fit"
    ),
    "token_type": (
        "segment #{j} ({texts}) always consists of one token class; a "
        "class-based rule and a position rule both fit"
    ),
    "repeating": (
        "segment #{j} ({texts}) occurs at several input positions ({pos}); "
        "which occurrence is meant is unclear"
    ),
}


def _witness_text(witness: Witness) -> str:
    texts = " | ".join(f"'{t}'" for t in witness.texts)
    pos = "; ".join(",".join(str(p) for p in row) for row in witness.positions)
    return _TEXT_TEMPLATES[witness.property].format(
        j=witness.segment_index,
        texts=texts,
        n=len(witness.texts[0]),
        text=witness.texts[0],
        pos=pos,
    )


def _render_text_report(example_id: str, report: AmbiguityReport) -> str:
    lines = [f"example {example_id}:"]
    by_property = {w.property: w for w in report.witnesses}
    for name, value in report.labels.as_dict().items():
        if value:
            lines.append(f"  {name}: YES - {_witness_text(by_property[name])}")
        else:
            lines.append(f"  {name}: no")
    for note in report.diagnostics:
        lines.append(f"  note: {note}")
    return "\n".join(lines)


def cmd_lint(args) -> int:
    records = read_dataset(args.dataset)
    for record in records:
        issues = validate_example(record.example)
        fatal = [i for i in issues if not i.warning]
        if fatal:
            raise ValidationError(
                f"example {record.example.id!r}: {fatal[0].message}"
            )
        for issue in issues:
            print(f"warning: {issue.example_id}: {issue.message}", file=sys.stderr)

    reports = _ordered_map(lambda r: detect_all(r.example), records)
    dicts = [
        report.as_dict(record.example.id)
        for record, report in zip(records, reports)
    ]
    if args.format == "text":
        for record, report in zip(records, reports):
            print(_render_text_report(record.example.id, report))
    else:
        for d in dicts:
            print(json.dumps(d))
    if args.predict_file:
        write_predictions(
            [
                PredictionRecord(record.example.id, report.labels)
                for record, report in zip(records, reports)
            ],
            args.predict_file,
        )
    if args.figure:
        from .figures import render_label_frequencies

        render_label_frequencies(dicts, args.figure)
    return EXIT_OK


def _read_unseen(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh if line.strip()]


def cmd_synth(args) -> int:
    records = read_dataset(args.dataset)
    unseen = _read_unseen(args.unseen) if args.unseen else []
    cfg = SynthesisConfig(max_size=args.max_size)

    def one(record: DatasetRecord) -> dict:
        programs = synthesize(record.example, cfg)
        entry = {
            "id": record.example.id,
            "programs": [
                {"text": format_program(p), "size": p.size} for p in programs
            ],
            "divergence": {},
            "intent_counts": {},
            "errors": {},
        }
        if programs and unseen:
            report = divergence(programs, unseen)
            entry["divergence"] = report.outputs_by_input
            entry["intent_counts"] = report.intent_counts
            entry["errors"] = report.errors_by_input
        return entry

    for entry in _ordered_map(one, records):
        print(json.dumps(entry))
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be >= 1")
    cfg = GenConfig(
        property=args.property,
        examples=args.count,
        samples_per_example=args.samples,
        segment_len=tuple(args.segment_len),
        max_segments=args.max_segments,
        seed=args.seed,
        negative_for=args.negative_for,
    )
    records, stats = generate(cfg)
    write_dataset(records, args.out)
    print(json.dumps(stats.as_dict()), file=sys.stderr)
    return EXIT_OK


def cmd_eval(args) -> int:
    gold = read_dataset(args.gold)
    predictions = read_predictions(args.pred)
    scores = score(gold, predictions)
    print(json.dumps({name: s.as_dict() for name, s in scores.items()}, indent=2))
    if args.figure:
        from .figures import render_scores

        render_scores(scores, args.figure)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pbelint", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    lint = sub.add_parser("lint", help="detect ambiguity properties in a dataset")
    lint.add_argument("dataset")
    lint.add_argument("--format", choices=("json", "text"), default="json")
    lint.add_argument("--predict-file", default=None)
    lint.add_argument("--figure", default=None, help="write a property-frequency chart")
    lint.set_defaults(fn=cmd_lint)

    synth = sub.add_parser(
        "synth", help="enumerate consistent programs and their divergence"
    )
    synth.add_argument("dataset")
    synth.add_argument("--unseen", default=None, help="file of unseen inputs, one per line")
    synth.add_argument("--max-size", type=int, default=7)
    synth.set_defaults(fn=cmd_synth)

    gen = sub.add_parser("gen", help="generate an oracle-labeled dataset")
    gen.add_argument(
        "--property",
        required=True,
        choices=(
            "similar_length",
            "exact_position",
            "exact_match",
            "token_type",
            "repeating",
            NEGATIVE,
        ),
    )
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--samples", type=int, default=3, help="samples per example")
    gen.add_argument(
        "--segment-len", type=int, nargs=2, default=(2, 9), metavar=("LO", "HI")
    )
    gen.add_argument("--max-segments", type=int, default=4)
    gen.add_argument(
        "--negative-for",
        default=None,
        help="with --property negative: keep records where this property is false",
    )
    gen.add_argument("--out", required=True)
    gen.set_defaults(fn=cmd_gen)

    ev = sub.add_parser("eval", help="score a prediction file against gold labels")
    ev.add_argument("--gold", required=True)
    ev.add_argument("--pred", required=True)
    ev.add_argument("--figure", default=None, help="write a score bar chart")
    ev.set_defaults(fn=cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except (UsageError, DatasetFormatError, ValidationError, ScoringError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GenerationStallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
