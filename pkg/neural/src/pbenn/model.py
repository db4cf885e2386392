"""Multi-task attention model over raw I/O characters.

Hard parameter sharing: a character embedding and an input LSTM encoder are
shared by all five tasks; each task owns an additive-attention output encoder,
a convolution-and-pooling stage over the per-character concatenation of the l
sample encodings, and a two-class classification head. Attention weights are
used raw (no normalization); the no_attention variant fixes them to 1, no_cnn
flattens the concatenation matrix straight into the classifier, and the gru
variant swaps every LSTM for a GRU of the same hidden size.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import nn

from .encoding import PAD_INDEX, VOCAB

VARIANTS = ("full", "no_cnn", "no_attention", "gru")


@dataclass
class ModelConfig:
    n: int
    m: int
    l: int = 3
    embed_dim: int = 128
    hidden: int = 512
    attention_dim: int = 128
    tasks: int = 5
    conv_channels: int = 512
    conv_rows: int = 2
    loss_weights: tuple[float, ...] = (1.0, 1.0, 1.0, 1.0, 1.0)
    epochs: int = 10
    batch_size: int = 32
    variant: str = "full"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if len(self.loss_weights) != self.tasks:
            raise ValueError("need one loss weight per task")
        if any(w < 0 for w in self.loss_weights):
            raise ValueError("loss weights must be >= 0")


class TaskModule(nn.Module):
    """One property head: attention output encoder, conv+pool, classifier."""

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.cfg = cfg
        self.attn_query = nn.Linear(cfg.embed_dim, cfg.attention_dim)
        self.attn_key = nn.Linear(cfg.hidden, cfg.attention_dim)
        self.attn_score = nn.Linear(cfg.attention_dim, 1, bias=False)
        rnn = nn.GRU if cfg.variant == "gru" else nn.LSTM
        self.output_encoder = rnn(
            cfg.hidden + cfg.embed_dim, cfg.hidden, batch_first=True
        )
        if cfg.variant == "no_cnn":
            self.classifier = nn.Linear(cfg.m * cfg.l * cfg.hidden, 2)
        else:
            self.conv = nn.Conv2d(
                1, cfg.conv_channels, kernel_size=(cfg.conv_rows, cfg.l * cfg.hidden)
            )
            self.classifier = nn.Linear(cfg.conv_channels, 2)

    def attention(
        self, out_embed: torch.Tensor, in_encoded: torch.Tensor
    ) -> torch.Tensor:
        """Raw additive attention vectors for every output character.

        out_embed: (B, m, E); in_encoded: (B, n, H) -> (B, m, H)
        """
        if self.cfg.variant == "no_attention":
            return in_encoded.sum(dim=1, keepdim=True).expand(
                -1, out_embed.shape[1], -1
            )
        query = self.attn_query(out_embed).unsqueeze(2)  # (B, m, 1, A)
        keys = self.attn_key(in_encoded).unsqueeze(1)  # (B, 1, n, A)
        weights = self.attn_score(torch.tanh(query + keys)).squeeze(-1)  # (B, m, n)
        return torch.bmm(weights, in_encoded)  # (B, m, H)

    def forward(
        self, out_embed: torch.Tensor, in_encoded: torch.Tensor, l: int
    ) -> torch.Tensor:
        """Logits (B, 2). out_embed/in_encoded carry l samples folded into batch."""
        attended = self.attention(out_embed, in_encoded)
        combined = torch.cat([attended, out_embed], dim=-1)  # (B*l, m, H+E)
        encoded, _ = self.output_encoder(combined)  # (B*l, m, H)
        batch = encoded.shape[0] // l
        m, hidden = encoded.shape[1], encoded.shape[2]
        # rows are output characters, columns the l concatenated sample encodings
        q = (
            encoded.reshape(batch, l, m, hidden)
            .permute(0, 2, 1, 3)
            .reshape(batch, m, l * hidden)
        )
        if self.cfg.variant == "no_cnn":
            return self.classifier(q.reshape(batch, -1))
        feature_map = self.conv(q.unsqueeze(1))  # (B, C, m-1, 1)
        pooled = feature_map.amax(dim=(2, 3))  # (B, C)
        return self.classifier(pooled)


class AmbiguityClassifier(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.cfg = cfg
        self.embedding = nn.Embedding(len(VOCAB), cfg.embed_dim, padding_idx=PAD_INDEX)
        rnn = nn.GRU if cfg.variant == "gru" else nn.LSTM
        self.input_encoder = rnn(cfg.embed_dim, cfg.hidden, batch_first=True)
        self.task_modules = nn.ModuleList(TaskModule(cfg) for _ in range(cfg.tasks))

    def forward(self, input_ids: torch.Tensor, output_ids: torch.Tensor) -> torch.Tensor:
        """Logits of shape (B, tasks, 2) for batched (B, l, n) / (B, l, m) indices."""
        batch, l, n = input_ids.shape
        flat_inputs = input_ids.reshape(batch * l, n)
        flat_outputs = output_ids.reshape(batch * l, -1)
        in_encoded, _ = self.input_encoder(self.embedding(flat_inputs))
        out_embed = self.embedding(flat_outputs)
        logits = [
            module(out_embed, in_encoded, l) for module in self.task_modules
        ]
        return torch.stack(logits, dim=1)

    def probabilities(
        self, input_ids: torch.Tensor, output_ids: torch.Tensor
    ) -> torch.Tensor:
        return torch.softmax(self.forward(input_ids, output_ids), dim=-1)


def task_losses(logits: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    """Per-task cross-entropy, shape (tasks,). labels: (B, tasks) in {0, 1}."""
    return torch.stack(
        [
            nn.functional.cross_entropy(logits[:, k, :], labels[:, k])
            for k in range(logits.shape[1])
        ]
    )


def weighted_total(losses: torch.Tensor, weights) -> torch.Tensor:
    weight_tensor = torch.as_tensor(weights, dtype=losses.dtype, device=losses.device)
    return (losses * weight_tensor).sum()
