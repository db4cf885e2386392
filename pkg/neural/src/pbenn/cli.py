"""pbenn command line: train the ambiguity classifier, predict with a checkpoint."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .encoding import AmbiguityDataset, EncodingError, load_records
from .model import VARIANTS


def cmd_train(args) -> int:
    from .train import train

    epochs, batch_size = args.epochs, args.batch_size
    if args.reference_scale:
        epochs, batch_size = 100, 5
    run = train(
        data_path=args.data,
        out_dir=args.out,
        variant=args.variant,
        seed=args.seed,
        epochs=epochs,
        batch_size=batch_size,
        val_data=args.val_data,
        val_fraction=args.val_fraction,
        hidden=args.hidden,
        loss_weights=tuple(args.loss_weights),
    )
    print(json.dumps(run.final_scores, indent=2))
    return 0


def cmd_predict(args) -> int:
    import torch

    from .train import load_checkpoint, predict_records

    model, cfg = load_checkpoint(Path(args.ckpt) / "model.pt")
    records = load_records(args.data)
    for record in records:
        if len(record.inputs) != cfg.l:
            raise EncodingError(
                f"record {record.id!r} has {len(record.inputs)} samples, model expects {cfg.l}"
            )
    dataset = AmbiguityDataset(records, cfg.l, cfg.n, cfg.m)
    torch.manual_seed(0)
    with open(args.out, "w", encoding="utf-8") as fh:
        for row in predict_records(model, dataset):
            fh.write(json.dumps(row) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pbenn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train on a labeled pbelint dataset")
    train.add_argument("--data", required=True)
    train.add_argument("--val-data", default=None, help="held-out labeled dataset")
    train.add_argument("--val-fraction", type=float, default=0.2)
    train.add_argument("--variant", choices=VARIANTS, default="full")
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--epochs", type=int, default=10)
    train.add_argument("--batch-size", type=int, default=32)
    train.add_argument("--hidden", type=int, default=512)
    train.add_argument(
        "--loss-weights", type=float, nargs=5, default=(1.0, 1.0, 1.0, 1.0, 1.0)
    )
    train.add_argument(
        "--reference-scale",
        action="store_true",
        help="use the reference regime (100 epochs, batch size 5)",
    )
    train.add_argument("--out", required=True)
    train.set_defaults(fn=cmd_train)

    predict = sub.add_parser("predict", help="write predictions for a dataset")
    predict.add_argument("--ckpt", required=True)
    predict.add_argument("--data", required=True)
    predict.add_argument("--out", required=True)
    predict.set_defaults(fn=cmd_predict)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except (EncodingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
