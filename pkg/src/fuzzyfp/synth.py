"""Seeded synthetic dataset with block-separable classes.

Each class activates its own disjoint coordinate block, so a correctly built
library separates the classes almost perfectly at K >= block size.  Used by
the acceptance suite and the `synth` CLI command so CI needs no external data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import ActivationDataset, EmbeddingRecord
from .errors import ParameterError


@dataclass(frozen=True)
class SyntheticSpec:
    classes: int = 7
    dimension: int = 768
    block: int = 40
    signal: float = 1.0
    noise_std: float = 0.1
    train_per_class: int = 100
    validation_per_class: int = 0
    test_per_class: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.classes < 1 or self.block < 1:
            raise ParameterError("classes and block size must be positive")
        if self.classes * self.block > self.dimension:
            raise ParameterError(
                f"{self.classes} classes x {self.block} block coordinates "
                f"do not fit in dimension {self.dimension}"
            )
        if self.train_per_class < 1:
            raise ParameterError("need at least one training example per class")
        if self.noise_std < 0:
            raise ParameterError("noise_std must be non-negative")


def make_separable_dataset(spec: SyntheticSpec) -> ActivationDataset:
    rng = np.random.default_rng(spec.seed)
    records = []
    counts = (
        ("train", spec.train_per_class),
        ("validation", spec.validation_per_class),
        ("test", spec.test_per_class),
    )
    for c in range(spec.classes):
        label = f"class{c}"
        mean = np.zeros(spec.dimension)
        mean[c * spec.block : (c + 1) * spec.block] = spec.signal
        for split, count in counts:
            for i in range(count):
                vector = mean + rng.normal(0.0, spec.noise_std, size=spec.dimension)
                records.append(
                    EmbeddingRecord(
                        id=f"{label}-{split}-{i:04d}",
                        split=split,
                        label=label,
                        vector=vector,
                    )
                )
    return ActivationDataset(records=tuple(records), dimension=spec.dimension)
