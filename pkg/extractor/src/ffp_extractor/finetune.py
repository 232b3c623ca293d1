"""Encoder fine-tuning with a linear softmax head, early stopping on
validation macro-F1, and best-checkpoint selection.  The head is discarded
after training; only the encoder is saved for extraction.
"""

from __future__ import annotations

import copy
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from torch import nn

from .config import ExtractorConfig
from .corpus import Dialogue
from .extract import encoder_inputs


@dataclass
class EarlyStopper:
    """Stop after `patience` consecutive epochs without improvement."""

    patience: int
    best_score: float = float("-inf")
    best_epoch: int = -1
    since_best: int = 0

    def update(self, epoch: int, score: float) -> bool:
        """Record an epoch score; True means training should stop now."""
        if score > self.best_score:
            self.best_score = score
            self.best_epoch = epoch
            self.since_best = 0
            return False
        self.since_best += 1
        return self.since_best >= self.patience


def macro_f1(gold, predicted, n_labels: int) -> float:
    total = 0.0
    for label in range(n_labels):
        tp = sum(1 for g, p in zip(gold, predicted) if g == label and p == label)
        fp = sum(1 for g, p in zip(gold, predicted) if g != label and p == label)
        fn = sum(1 for g, p in zip(gold, predicted) if g == label and p != label)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        total += 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return total / n_labels


def layer_wise_parameter_groups(encoder, encoder_lr: float, decay: float) -> list[dict]:
    """Per-layer learning rates: top layer gets `encoder_lr`, each layer below
    is scaled by `decay`, embeddings sit below the bottom layer."""
    num_layers = encoder.config.num_hidden_layers
    groups = []
    for name, params in _bucket_by_depth(encoder, num_layers).items():
        depth = name  # 0 = top layer
        groups.append({"params": params, "lr": encoder_lr * (decay ** depth)})
    return groups


def _bucket_by_depth(encoder, num_layers: int) -> dict[int, list]:
    buckets: dict[int, list] = {}
    for name, param in encoder.named_parameters():
        if ".layer." in name:
            layer = int(name.split(".layer.")[1].split(".")[0])
            depth = num_layers - 1 - layer
        elif name.startswith("embeddings"):
            depth = num_layers
        else:
            depth = 0  # pooler and other top-level parameters
        buckets.setdefault(depth, []).append(param)
    return buckets


@dataclass
class FineTuneResult:
    checkpoint_dir: Path
    label_names: tuple[str, ...]
    best_epoch: int
    stopped_epoch: int
    history: list[float] = field(default_factory=list)


class _UtteranceBatches:
    """Tokenized (input, label) pairs for one split, batched deterministically."""

    def __init__(self, config, dialogues, split, tokenizer, label_index):
        separator = config.separator if config.separator is not None else tokenizer.sep_token
        self.texts, self.labels = [], []
        for dialogue in dialogues:
            if dialogue[0].split != split:
                continue
            inputs = encoder_inputs(config, dialogue, separator)
            for utt, text in zip(dialogue, inputs):
                self.texts.append(text)
                self.labels.append(label_index[utt.label])
        self.tokenizer = tokenizer
        self.max_length = config.max_length

    def __len__(self):
        return len(self.texts)

    def batches(self, batch_size, order=None):
        order = list(range(len(self.texts))) if order is None else order
        for start in range(0, len(order), batch_size):
            idx = order[start : start + batch_size]
            encoded = self.tokenizer(
                [self.texts[i] for i in idx],
                padding=True,
                truncation=True,
                max_length=self.max_length,
                return_tensors="pt",
            )
            yield encoded, torch.tensor([self.labels[i] for i in idx], dtype=torch.long)


def fine_tune(
    config: ExtractorConfig, dialogues: list[Dialogue], out_dir, seed: int = 0
) -> FineTuneResult:
    """Train encoder + linear head on the train split, select the epoch with the
    best validation macro-F1, and save the encoder (head discarded) to out_dir."""
    from transformers import AutoModel, AutoTokenizer

    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)

    tokenizer = AutoTokenizer.from_pretrained(config.encoder)
    tokenizer.truncation_side = "left"
    encoder = AutoModel.from_pretrained(config.encoder)

    if not any(utt.split == "train" for dialogue in dialogues for utt in dialogue):
        raise ValueError("no train-split utterances to fine-tune on")
    # the head covers every label in the data, so validation scoring is total
    labels = sorted({utt.label for dialogue in dialogues for utt in dialogue})
    label_index = {label: i for i, label in enumerate(labels)}
    head = nn.Linear(encoder.config.hidden_size, len(labels))

    train = _UtteranceBatches(config, dialogues, "train", tokenizer, label_index)
    valid = _UtteranceBatches(config, dialogues, "validation", tokenizer, label_index)
    if len(valid) == 0:
        raise ValueError("no validation-split utterances for early stopping")

    optimizer = torch.optim.Adam(
        layer_wise_parameter_groups(encoder, config.encoder_lr, config.layer_decay)
        + [{"params": head.parameters(), "lr": config.head_lr}]
    )
    criterion = nn.CrossEntropyLoss()
    stopper = EarlyStopper(patience=config.patience)
    shuffler = random.Random(seed)
    best_state = None
    history = []
    stopped_epoch = config.max_epochs

    for epoch in range(1, config.max_epochs + 1):
        frozen = config.freeze_encoder_first_epoch and epoch == 1
        for param in encoder.parameters():
            param.requires_grad = not frozen

        encoder.train()
        head.train()
        order = list(range(len(train)))
        shuffler.shuffle(order)
        for encoded, gold in train.batches(config.batch_size, order):
            optimizer.zero_grad()
            hidden = encoder(**encoded).last_hidden_state[:, 0, :]
            loss = criterion(head(hidden), gold)
            loss.backward()
            trainable = [p for p in list(encoder.parameters()) + list(head.parameters())
                         if p.requires_grad]
            torch.nn.utils.clip_grad_norm_(trainable, config.grad_clip)
            optimizer.step()

        encoder.eval()
        head.eval()
        gold_all, pred_all = [], []
        with torch.no_grad():
            for encoded, gold in valid.batches(config.eval_batch_size):
                hidden = encoder(**encoded).last_hidden_state[:, 0, :]
                pred_all.extend(head(hidden).argmax(dim=-1).tolist())
                gold_all.extend(gold.tolist())
        score = macro_f1(gold_all, pred_all, len(labels))
        history.append(score)
        improved = score > stopper.best_score
        should_stop = stopper.update(epoch, score)
        if improved:
            best_state = copy.deepcopy(encoder.state_dict())
        if should_stop:
            stopped_epoch = epoch
            break

    if best_state is not None:
        encoder.load_state_dict(best_state)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    encoder.save_pretrained(out_dir)  # the classification head is not saved
    tokenizer.save_pretrained(out_dir)
    return FineTuneResult(
        checkpoint_dir=out_dir,
        label_names=tuple(labels),
        best_epoch=stopper.best_epoch,
        stopped_epoch=stopped_epoch,
        history=history,
    )
