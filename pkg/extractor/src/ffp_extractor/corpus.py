"""Dialogue ingestion: raw DailyDialog splits or the converted utterance file.

Only the wire formats are shared with the fuzzyfp package; there is no code
dependency in either direction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

SPLITS = ("train", "validation", "test")

LABELS = ("neutral", "anger", "disgust", "fear", "happiness", "sadness", "surprise")

_EOU = "__eou__"


@dataclass(frozen=True)
class Utterance:
    dialogue_id: str
    turn_index: int
    text: str
    label: str
    split: str

    @property
    def record_id(self) -> str:
        return f"{self.dialogue_id}:{self.turn_index}"


Dialogue = list[Utterance]


def read_dailydialog(data_dir) -> list[Dialogue]:
    """Parse whatever per-split files exist under `data_dir`."""
    data_dir = Path(data_dir)
    dialogues: list[Dialogue] = []
    for split in SPLITS:
        text_path = label_path = None
        for base in (data_dir / split, data_dir):
            t = base / f"dialogues_{split}.txt"
            l = base / f"dialogues_emotion_{split}.txt"
            if t.is_file() and l.is_file():
                text_path, label_path = t, l
                break
        if text_path is None:
            continue
        text_lines = text_path.read_text(encoding="utf-8").splitlines()
        label_lines = label_path.read_text(encoding="utf-8").splitlines()
        if len(text_lines) != len(label_lines):
            raise ValueError(f"{text_path} and {label_path} disagree on dialogue count")
        for lineno, (text_line, label_line) in enumerate(zip(text_lines, label_lines), 1):
            parts = text_line.split(_EOU)
            if parts and not parts[-1].strip():
                parts = parts[:-1]
            texts = [part.strip() for part in parts]
            raw_labels = label_line.split()
            if len(raw_labels) != len(texts):
                raise ValueError(
                    f"{label_path}:{lineno}: {len(texts)} utterances vs {len(raw_labels)} labels"
                )
            dialogue = [
                Utterance(
                    dialogue_id=f"{split}-{lineno}",
                    turn_index=turn,
                    text=text,
                    label=LABELS[int(raw)],
                    split=split,
                )
                for turn, (text, raw) in enumerate(zip(texts, raw_labels))
            ]
            dialogues.append(dialogue)
    if not dialogues:
        raise ValueError(f"no DailyDialog split files found under {data_dir}")
    return dialogues


def read_utterance_file(path) -> list[Dialogue]:
    """Group a converted utterance file (JSON lines) back into dialogues.

    Records whose ids look like `<dialogue>:<turn>` are grouped and ordered by
    turn; any other id becomes its own single-utterance dialogue.
    """
    path = Path(path)
    rows = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                raise ValueError(f"{path}:{lineno}: blank line in record stream")
            obj = json.loads(line)
            for field in ("id", "split", "label", "text"):
                if field not in obj:
                    raise ValueError(f"{path}:{lineno}: record lacks {field!r}")
            rows.append(obj)
    if not rows:
        raise ValueError(f"{path} holds no records")

    grouped: dict[str, list[tuple[int, dict]]] = {}
    order: list[str] = []
    for obj in rows:
        dialogue_id, turn = _parse_record_id(obj["id"])
        if dialogue_id not in grouped:
            grouped[dialogue_id] = []
            order.append(dialogue_id)
        grouped[dialogue_id].append((turn, obj))

    dialogues = []
    for dialogue_id in order:
        turns = sorted(grouped[dialogue_id], key=lambda pair: pair[0])
        splits = {obj["split"] for _, obj in turns}
        if len(splits) > 1:
            raise ValueError(f"dialogue {dialogue_id!r} spans several splits: {sorted(splits)}")
        dialogues.append(
            [
                Utterance(
                    dialogue_id=dialogue_id,
                    turn_index=turn,
                    text=obj["text"],
                    label=obj["label"],
                    split=obj["split"],
                )
                for turn, obj in turns
            ]
        )
    return dialogues


def _parse_record_id(record_id: str) -> tuple[str, int]:
    head, sep, tail = str(record_id).rpartition(":")
    if sep and head and tail.isdigit():
        return head, int(tail)
    return str(record_id), 0
