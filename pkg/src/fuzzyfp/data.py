"""Labeled record and dataset containers for both feature spaces.

These are pure in-memory types; file ingestion lives in :mod:`fuzzyfp.storage`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import BuildError, DataFormatError, DimensionError
from .fingerprint import FeatureSpace

SPLITS = ("train", "validation", "test")

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumeric runs, dropping empties."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Utterance:
    """One conversational turn with its emotion label."""

    dialogue_id: str
    turn_index: int
    text: str
    label: str


@dataclass(frozen=True)
class EmbeddingRecord:
    """A labeled feature vector attached to an instance id and split."""

    id: str
    split: str
    label: str
    vector: np.ndarray

    def __post_init__(self):
        vec = np.asarray(self.vector, dtype=np.float64)
        vec.setflags(write=False)
        object.__setattr__(self, "vector", vec)
        if self.split not in SPLITS:
            raise DataFormatError(f"record {self.id!r}: unknown split {self.split!r}")
        if vec.ndim != 1 or vec.size == 0:
            raise DimensionError(f"record {self.id!r}: vector must be non-empty 1-d")
        if not np.isfinite(vec).all():
            raise DataFormatError(f"record {self.id!r}: vector holds non-finite values")


@dataclass(frozen=True)
class TokenRecord:
    """A labeled text instance; its token bag is derived on demand."""

    id: str
    split: str
    label: str
    text: str

    def __post_init__(self):
        if self.split not in SPLITS:
            raise DataFormatError(f"record {self.id!r}: unknown split {self.split!r}")

    def bag(self) -> "LabeledTokenBag":
        return LabeledTokenBag(id=self.id, label=self.label, tokens=tuple(tokenize(self.text)))


@dataclass(frozen=True)
class LabeledTokenBag:
    """Token multiset for one labeled instance."""

    id: str
    label: str
    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.tokens:
            raise BuildError(f"instance {self.id!r} yields an empty token bag")


@dataclass(frozen=True)
class ActivationDataset:
    """Vectors in a fixed-dimension activation space, grouped by split tags."""

    records: tuple[EmbeddingRecord, ...]
    dimension: int

    feature_space = FeatureSpace.ACTIVATION

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        for rec in self.records:
            if rec.vector.size != self.dimension:
                raise DimensionError(
                    f"record {rec.id!r} has dimension {rec.vector.size}, expected {self.dimension}"
                )

    def __len__(self) -> int:
        return len(self.records)

    def labels(self) -> tuple[str, ...]:
        return tuple(sorted({rec.label for rec in self.records}))

    def split(self, name: str) -> "ActivationDataset":
        return ActivationDataset(
            records=tuple(r for r in self.records if r.split == name),
            dimension=self.dimension,
        )


@dataclass(frozen=True)
class TokenDataset:
    """Text instances classified over their token bags."""

    records: tuple[TokenRecord, ...] = field(default_factory=tuple)

    feature_space = FeatureSpace.TOKEN
    dimension = None

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    def __len__(self) -> int:
        return len(self.records)

    def labels(self) -> tuple[str, ...]:
        return tuple(sorted({rec.label for rec in self.records}))

    def split(self, name: str) -> "TokenDataset":
        return TokenDataset(records=tuple(r for r in self.records if r.split == name))

    def bags(self) -> list[LabeledTokenBag]:
        return [rec.bag() for rec in self.records]


def dataset_from_records(records: Iterable) -> ActivationDataset | TokenDataset:
    """Wrap a homogeneous record sequence in the matching dataset type."""
    records = tuple(records)
    if not records:
        raise BuildError("cannot build a dataset from zero records")
    if isinstance(records[0], EmbeddingRecord):
        return ActivationDataset(records=records, dimension=records[0].vector.size)
    return TokenDataset(records=records)
