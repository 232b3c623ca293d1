"""Extractor configuration: one config file, flags override."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class ExtractorConfig:
    """Encoder, context construction, and fine-tuning hyperparameters."""

    encoder: str = "roberta-base"
    context_window: int = 1          # previous utterances concatenated with the current one
    max_length: int = 512
    separator: str | None = None     # None = the tokenizer's own separator token
    fine_tune: bool = False
    encoder_lr: float = 1e-5
    head_lr: float = 5e-5
    layer_decay: float = 0.95        # per-layer factor below the top encoder layer
    batch_size: int = 4
    grad_clip: float = 1.0
    patience: int = 5                # epochs without validation improvement
    max_epochs: int = 10
    freeze_encoder_first_epoch: bool = True
    seeds: tuple[int, ...] = (0,)
    eval_batch_size: int = 16        # inference batching only; no training effect

    def __post_init__(self):
        if self.context_window < 0:
            raise ValueError(f"context_window must be >= 0, got {self.context_window}")
        if self.max_length < 8:
            raise ValueError(f"max_length must be >= 8, got {self.max_length}")
        if self.batch_size < 1 or self.eval_batch_size < 1:
            raise ValueError("batch sizes must be positive")
        if self.max_epochs < 1 or self.patience < 1:
            raise ValueError("max_epochs and patience must be positive")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))


def load_config(path=None, **overrides) -> ExtractorConfig:
    """Read a JSON config file (optional) and apply non-None keyword overrides."""
    values = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ValueError(f"config file {path} must hold a JSON object")
        known = {f.name for f in fields(ExtractorConfig)}
        unknown = set(loaded) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    config = ExtractorConfig(**values)
    cleaned = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **cleaned) if cleaned else config
