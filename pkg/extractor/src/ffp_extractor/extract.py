"""Embedding extraction: encoder last layer at the classification-token position."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .config import ExtractorConfig
from .corpus import Dialogue
from .inputs import build_input


def load_encoder(name_or_path):
    """Load tokenizer + encoder for inference; truncation keeps the newest tokens."""
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(name_or_path)
    tokenizer.truncation_side = "left"
    model = AutoModel.from_pretrained(name_or_path)
    model.eval()
    return tokenizer, model


def encoder_inputs(config: ExtractorConfig, dialogue: Dialogue, separator: str) -> list[str]:
    texts = [utt.text for utt in dialogue]
    return [
        build_input(texts, i, config.context_window, separator) for i in range(len(texts))
    ]


@torch.no_grad()
def embed_texts(texts, tokenizer, model, max_length: int, batch_size: int):
    """Vectors for `texts` (input order) plus how many had to be truncated."""
    vectors = []
    truncated = 0
    device = next(model.parameters()).device
    for start in range(0, len(texts), batch_size):
        batch = texts[start : start + batch_size]
        full = tokenizer(batch, padding=False, truncation=False)["input_ids"]
        truncated += sum(1 for ids in full if len(ids) > max_length)
        encoded = tokenizer(
            batch,
            padding=True,
            truncation=True,
            max_length=max_length,
            return_tensors="pt",
        ).to(device)
        hidden = model(**encoded).last_hidden_state
        vectors.extend(hidden[:, 0, :].cpu().tolist())  # classification-token position
    return vectors, truncated


def extract_records(
    config: ExtractorConfig, dialogues: list[Dialogue], tokenizer, model
) -> tuple[list[dict], int]:
    """One embedding record per utterance, ordered by (dialogue, turn)."""
    separator = config.separator if config.separator is not None else tokenizer.sep_token
    rows = []
    truncated_total = 0
    for dialogue in dialogues:
        inputs = encoder_inputs(config, dialogue, separator)
        vectors, truncated = embed_texts(
            inputs, tokenizer, model, config.max_length, config.eval_batch_size
        )
        truncated_total += truncated
        for utt, vector in zip(dialogue, vectors):
            rows.append(
                {
                    "id": utt.record_id,
                    "split": utt.split,
                    "label": utt.label,
                    "vector": [float(x) for x in vector],
                }
            )
    return rows, truncated_total


def write_embeddings(rows: list[dict], path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def write_metadata(path, config: ExtractorConfig, *, checkpoint=None, truncated=0, seed=None):
    """Sidecar describing how the embedding file was produced."""
    meta = {
        "encoder": config.encoder if checkpoint is None else str(checkpoint),
        "context_window": config.context_window,
        "separator": config.separator,
        "max_length": config.max_length,
        "truncated_inputs": truncated,
        "seed": seed,
    }
    meta_path = Path(str(path) + ".meta.json")
    with meta_path.open("w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_extraction(
    config: ExtractorConfig,
    dialogues: list[Dialogue],
    out_path,
    checkpoint=None,
    seed=None,
) -> int:
    """Extract embeddings for every utterance and write the dataset + metadata."""
    tokenizer, model = load_encoder(checkpoint if checkpoint is not None else config.encoder)
    rows, truncated = extract_records(config, dialogues, tokenizer, model)
    write_embeddings(rows, out_path)
    write_metadata(out_path, config, checkpoint=checkpoint, truncated=truncated, seed=seed)
    return truncated
