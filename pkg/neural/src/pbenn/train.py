"""Training loop: seeded, single-process, checkpoint plus held-out predictions."""

from __future__ import annotations

import json
import random
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import torch
from torch.utils.data import DataLoader

from .encoding import (
    AmbiguityDataset,
    PROPERTIES,
    Record,
    load_records,
    scan_lengths,
)
from .model import AmbiguityClassifier, ModelConfig, task_losses, weighted_total

LEARNING_RATE = 1e-3


@dataclass
class TrainRun:
    seed: int
    variant: str
    epochs: list[dict]
    final_scores: dict[str, float]
    checkpoint: str

    def as_dict(self) -> dict:
        return asdict(self)


def _split_records(
    records: Sequence[Record], val_fraction: float, seed: int
) -> tuple[list[Record], list[Record]]:
    order = list(records)
    random.Random(seed).shuffle(order)
    cut = max(1, int(len(order) * val_fraction))
    return order[cut:], order[:cut]


def _accuracy_per_property(
    model: AmbiguityClassifier, loader: DataLoader
) -> dict[str, float]:
    model.eval()
    correct = torch.zeros(len(PROPERTIES))
    total = 0
    with torch.no_grad():
        for input_ids, output_ids, labels in loader:
            predictions = model(input_ids, output_ids).argmax(dim=-1)
            correct += (predictions == labels).sum(dim=0)
            total += labels.shape[0]
    return {name: correct[k].item() / total for k, name in enumerate(PROPERTIES)}


def predict_records(
    model: AmbiguityClassifier, dataset: AmbiguityDataset, batch_size: int = 64
) -> list[dict]:
    model.eval()
    rows = []
    loader = DataLoader(dataset, batch_size=batch_size)
    index = 0
    with torch.no_grad():
        for input_ids, output_ids, _ in loader:
            predictions = model(input_ids, output_ids).argmax(dim=-1)
            for row in predictions:
                record = dataset.records[index]
                rows.append(
                    {
                        "id": record.id,
                        "pred": {
                            name: bool(row[k].item())
                            for k, name in enumerate(PROPERTIES)
                        },
                    }
                )
                index += 1
    return rows


def save_checkpoint(path: Path, model: AmbiguityClassifier, cfg: ModelConfig) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    torch.save({"state_dict": model.state_dict(), "config": asdict(cfg)}, path)


def load_checkpoint(path: Path) -> tuple[AmbiguityClassifier, ModelConfig]:
    payload = torch.load(path, map_location="cpu", weights_only=False)
    cfg = ModelConfig(**payload["config"])
    model = AmbiguityClassifier(cfg)
    model.load_state_dict(payload["state_dict"])
    return model, cfg


def train(
    data_path: str,
    out_dir: str,
    variant: str = "full",
    seed: int = 0,
    epochs: int = 10,
    batch_size: int = 32,
    val_data: Optional[str] = None,
    val_fraction: float = 0.2,
    hidden: int = 512,
    loss_weights: Sequence[float] = (1.0, 1.0, 1.0, 1.0, 1.0),
    log=sys.stderr,
) -> TrainRun:
    torch.manual_seed(seed)
    records = load_records(data_path, require_labels=True)
    if val_data:
        train_records = list(records)
        val_records = load_records(val_data, require_labels=True)
    else:
        train_records, val_records = _split_records(records, val_fraction, seed)

    lengths = {len(r.inputs) for r in records} | {len(r.inputs) for r in val_records}
    if len(lengths) != 1:
        raise ValueError(f"mixed samples-per-example counts {sorted(lengths)}")
    l = lengths.pop()
    n, m = scan_lengths(list(records) + list(val_records))
    cfg = ModelConfig(
        n=n,
        m=m,
        l=l,
        hidden=hidden,
        loss_weights=tuple(loss_weights),
        epochs=epochs,
        batch_size=batch_size,
        variant=variant,
    )
    model = AmbiguityClassifier(cfg)
    optimizer = torch.optim.Adam(model.parameters(), lr=LEARNING_RATE)

    train_set = AmbiguityDataset(train_records, l, n, m)
    val_set = AmbiguityDataset(val_records, l, n, m)
    generator = torch.Generator().manual_seed(seed)
    loader = DataLoader(
        train_set, batch_size=batch_size, shuffle=True, generator=generator
    )

    epoch_logs = []
    for epoch in range(epochs):
        model.train()
        sums = torch.zeros(len(PROPERTIES))
        total_sum = 0.0
        batches = 0
        started = time.monotonic()
        for input_ids, output_ids, labels in loader:
            optimizer.zero_grad()
            logits = model(input_ids, output_ids)
            losses = task_losses(logits, labels)
            total = weighted_total(losses, cfg.loss_weights)
            total.backward()
            optimizer.step()
            sums += losses.detach()
            total_sum += total.item()
            batches += 1
        entry = {
            "epoch": epoch,
            "task_losses": [round(v, 6) for v in (sums / batches).tolist()],
            "total_loss": round(total_sum / batches, 6),
            "seconds": round(time.monotonic() - started, 2),
        }
        epoch_logs.append(entry)
        print(f"epoch {epoch}: {entry}", file=log, flush=True)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    checkpoint = out / "model.pt"
    save_checkpoint(checkpoint, model, cfg)

    val_loader = DataLoader(val_set, batch_size=max(batch_size, 64))
    scores = _accuracy_per_property(model, val_loader)
    with open(out / "predictions.jsonl", "w", encoding="utf-8") as fh:
        for row in predict_records(model, val_set):
            fh.write(json.dumps(row) + "\n")

    run = TrainRun(
        seed=seed,
        variant=variant,
        epochs=epoch_logs,
        final_scores=scores,
        checkpoint=str(checkpoint),
    )
    with open(out / "run.json", "w", encoding="utf-8") as fh:
        json.dump(run.as_dict(), fh, indent=2)
    return run
