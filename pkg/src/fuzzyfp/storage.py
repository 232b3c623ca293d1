"""File ingestion and serialization.

Formats:
  * embedding dataset: one JSON object per line with id/split/label/vector
  * token dataset: same shape with a text field instead of vector
  * library file: a single versioned JSON document
  * raw DailyDialog: per-split utterance files (``__eou__`` separated) plus
    parallel emotion files of space-separated label integers per dialogue
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Mapping

from .build import FingerprintLibrary
from .data import SPLITS, ActivationDataset, EmbeddingRecord, TokenDataset, TokenRecord, Utterance
from .errors import DataFormatError, DimensionError, FuzzyFPError, UnsupportedVersionError
from .fingerprint import FeatureSpace, Fingerprint, FuzzifyParams

LIBRARY_FORMAT_VERSION = 1

# public DailyDialog convention: 0 = no emotion ... 6 = surprise
DAILYDIALOG_LABELS = (
    "neutral",
    "anger",
    "disgust",
    "fear",
    "happiness",
    "sadness",
    "surprise",
)

_EOU = "__eou__"


def _parse_jsonl(path) -> list[tuple[int, dict]]:
    path = Path(path)
    rows = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped:
                raise DataFormatError("blank line in record stream", path=path, line=lineno)
            try:
                obj = json.loads(stripped)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"invalid JSON: {exc}", path=path, line=lineno) from exc
            if not isinstance(obj, dict):
                raise DataFormatError("each line must be a JSON object", path=path, line=lineno)
            rows.append((lineno, obj))
    if not rows:
        raise DataFormatError("file holds no records (empty dataset)", path=path)
    return rows


def _require_fields(obj, fields, path, lineno) -> None:
    for name in fields:
        if name not in obj:
            raise DataFormatError(f"record is missing the {name!r} field", path=path, line=lineno)
    if not isinstance(obj["id"], str) or not obj["id"]:
        raise DataFormatError("record id must be a non-empty string", path=path, line=lineno)
    if obj["split"] not in SPLITS:
        raise DataFormatError(
            f"record {obj['id']!r} has unknown split {obj['split']!r} "
            f"(expected one of {', '.join(SPLITS)})",
            path=path,
            line=lineno,
        )
    if not isinstance(obj["label"], str) or not obj["label"]:
        raise DataFormatError(
            f"record {obj['id']!r} label must be a non-empty string", path=path, line=lineno
        )


def load_embeddings(path) -> ActivationDataset:
    """Read a line-delimited embedding dataset, validating a constant dimension."""
    path = Path(path)
    records = []
    dimension = None
    for lineno, obj in _parse_jsonl(path):
        _require_fields(obj, ("id", "split", "label", "vector"), path, lineno)
        vector = obj["vector"]
        if (
            not isinstance(vector, list)
            or not vector
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in vector)
        ):
            raise DataFormatError(
                f"record {obj['id']!r} vector must be a non-empty array of numbers",
                path=path,
                line=lineno,
            )
        if not all(math.isfinite(x) for x in vector):
            raise DataFormatError(
                f"record {obj['id']!r} vector holds non-finite values", path=path, line=lineno
            )
        if dimension is None:
            dimension = len(vector)
        elif len(vector) != dimension:
            raise DimensionError(
                f"{path}:{lineno}: record {obj['id']!r} has {len(vector)} values, "
                f"expected {dimension}"
            )
        records.append(
            EmbeddingRecord(id=obj["id"], split=obj["split"], label=obj["label"], vector=vector)
        )
    return ActivationDataset(records=tuple(records), dimension=dimension)


def save_embeddings(dataset: ActivationDataset, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for rec in dataset.records:
            fh.write(
                json.dumps(
                    {
                        "id": rec.id,
                        "split": rec.split,
                        "label": rec.label,
                        "vector": [float(x) for x in rec.vector],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_token_dataset(path) -> TokenDataset:
    """Read a line-delimited text dataset (id/split/label/text per line)."""
    path = Path(path)
    records = []
    for lineno, obj in _parse_jsonl(path):
        _require_fields(obj, ("id", "split", "label", "text"), path, lineno)
        if not isinstance(obj["text"], str):
            raise DataFormatError(
                f"record {obj['id']!r} text must be a string", path=path, line=lineno
            )
        records.append(
            TokenRecord(id=obj["id"], split=obj["split"], label=obj["label"], text=obj["text"])
        )
    return TokenDataset(records=tuple(records))


def save_token_dataset(dataset: TokenDataset, path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for rec in dataset.records:
            fh.write(
                json.dumps(
                    {"id": rec.id, "split": rec.split, "label": rec.label, "text": rec.text},
                    ensure_ascii=False,
                )
                + "\n"
            )


def _split_files(data_dir: Path, split: str) -> tuple[Path, Path] | None:
    # both published layouts: flat files, or one subdirectory per split
    for base in (data_dir / split, data_dir):
        text = base / f"dialogues_{split}.txt"
        labels = base / f"dialogues_emotion_{split}.txt"
        if text.is_file() and labels.is_file():
            return text, labels
    return None


def load_dailydialog(data_dir) -> dict[str, list[list[Utterance]]]:
    """Load raw DailyDialog splits found under `data_dir`.

    Returns dialogues per split; each dialogue is a list of labeled utterances.
    """
    data_dir = Path(data_dir)
    if not data_dir.is_dir():
        raise DataFormatError(f"dataset directory {data_dir} does not exist")
    splits: dict[str, list[list[Utterance]]] = {}
    for split in SPLITS:
        found = _split_files(data_dir, split)
        if found is None:
            continue
        text_path, label_path = found
        text_lines = text_path.read_text(encoding="utf-8").splitlines()
        label_lines = label_path.read_text(encoding="utf-8").splitlines()
        if len(text_lines) != len(label_lines):
            raise DataFormatError(
                f"{text_path} has {len(text_lines)} dialogues but {label_path} "
                f"has {len(label_lines)} label lines"
            )
        dialogues = []
        for lineno, (text_line, label_line) in enumerate(zip(text_lines, label_lines), 1):
            parts = text_line.split(_EOU)
            if parts and not parts[-1].strip():
                parts = parts[:-1]
            texts = [part.strip() for part in parts]
            raw_labels = label_line.split()
            if len(raw_labels) != len(texts):
                raise DataFormatError(
                    f"dialogue has {len(texts)} utterances but {len(raw_labels)} labels",
                    path=label_path,
                    line=lineno,
                )
            utterances = []
            for turn, (text, raw) in enumerate(zip(texts, raw_labels)):
                try:
                    value = int(raw)
                except ValueError:
                    raise DataFormatError(
                        f"label {raw!r} is not an integer", path=label_path, line=lineno
                    ) from None
                if not 0 <= value < len(DAILYDIALOG_LABELS):
                    raise DataFormatError(
                        f"label integer {value} outside 0..{len(DAILYDIALOG_LABELS) - 1}",
                        path=label_path,
                        line=lineno,
                    )
                utterances.append(
                    Utterance(
                        dialogue_id=f"{split}-{lineno}",
                        turn_index=turn,
                        text=text,
                        label=DAILYDIALOG_LABELS[value],
                    )
                )
            dialogues.append(utterances)
        splits[split] = dialogues
    if not splits:
        raise DataFormatError(
            f"no DailyDialog split files found under {data_dir} "
            f"(expected dialogues_<split>.txt + dialogues_emotion_<split>.txt)"
        )
    return splits


def dailydialog_token_records(
    splits: Mapping[str, Iterable[Iterable[Utterance]]]
) -> TokenDataset:
    """Flatten loaded dialogues into the token dataset record shape."""
    records = []
    for split in SPLITS:
        for dialogue in splits.get(split, ()):
            for utt in dialogue:
                records.append(
                    TokenRecord(
                        id=f"{utt.dialogue_id}:{utt.turn_index}",
                        split=split,
                        label=utt.label,
                        text=utt.text,
                    )
                )
    return TokenDataset(records=tuple(records))


def save_library(library: FingerprintLibrary, path) -> None:
    """Write a library as one versioned, self-describing JSON document."""
    path = Path(path)
    doc = {
        "format_version": LIBRARY_FORMAT_VERSION,
        "feature_space": library.feature_space.value,
        "dimension": library.dimension,
        "k": library.params.k,
        "a": library.params.a,
        "use_magnitude": library.use_magnitude,
        "classes": {
            label: [[element, mu] for element, mu in library[label].entries]
            for label in library.labels()
        },
    }
    with path.open("w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def load_library(path) -> FingerprintLibrary:
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataFormatError(f"not a valid library file: {exc}", path=path) from exc
    if not isinstance(doc, dict):
        raise DataFormatError("not a library document", path=path)
    version = doc.get("format_version")
    if version is None:
        raise DataFormatError("library document lacks a format_version", path=path)
    if version != LIBRARY_FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"library format version {version!r} is not supported "
            f"(this build reads version {LIBRARY_FORMAT_VERSION})",
            path=path,
        )
    try:
        space = FeatureSpace(doc["feature_space"])
        params = FuzzifyParams(k=int(doc["k"]), a=float(doc["a"]))
        dimension = doc["dimension"]
        use_magnitude = bool(doc.get("use_magnitude", False))
        classes = doc["classes"]
        fingerprints = {}
        for label, rows in classes.items():
            entries = tuple((element, float(mu)) for element, mu in rows)
            fingerprints[label] = Fingerprint(entries=entries, k=params.k, feature_space=space)
    except DataFormatError:
        raise
    except (KeyError, TypeError, ValueError, FuzzyFPError) as exc:
        raise DataFormatError(f"malformed library document: {exc}", path=path) from exc
    return FingerprintLibrary(
        fingerprints=fingerprints,
        params=params,
        dimension=None if dimension is None else int(dimension),
        feature_space=space,
        use_magnitude=use_magnitude,
    )
