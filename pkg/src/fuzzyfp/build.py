"""Construct per-class fingerprints and fingerprint libraries from labeled data.

Activation space: per-class element ranking comes from summing every training
vector of the class and ordering coordinates by the accumulated value.
Token space: ranking comes from total token frequency across the class.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .data import ActivationDataset, EmbeddingRecord, LabeledTokenBag, TokenDataset
from .errors import BuildError, DimensionError, FuzzyFPError, ParameterError
from .fingerprint import (
    Element,
    FeatureSpace,
    Fingerprint,
    FuzzifyParams,
    fuzzify,
    rank_by_value,
)


@dataclass
class ClassAccumulator:
    """Running coordinate-wise sum of one class's training vectors."""

    label: str
    sums: np.ndarray
    count: int


def accumulate_class(examples: Sequence[EmbeddingRecord]) -> ClassAccumulator:
    """Sum the vectors of one class; all examples must share the label."""
    examples = list(examples)
    if not examples:
        raise BuildError("cannot accumulate an empty example sequence")
    label = examples[0].label
    dim = examples[0].vector.size
    sums = np.zeros(dim, dtype=np.float64)
    for rec in examples:
        if rec.label != label:
            raise BuildError(
                f"mixed labels in accumulation: {label!r} vs {rec.label!r} (record {rec.id!r})"
            )
        if rec.vector.size != dim:
            raise DimensionError(
                f"record {rec.id!r} has dimension {rec.vector.size}, expected {dim}"
            )
        sums += rec.vector
    return ClassAccumulator(label=label, sums=sums, count=len(examples))


def rank_activations(sums: np.ndarray, use_magnitude: bool = False) -> list[int]:
    """Full coordinate ranking for an accumulated class (or a single instance)."""
    values = np.abs(sums) if use_magnitude else sums
    return rank_by_value(values)


def rank_tokens(bags: Iterable[LabeledTokenBag]) -> list[str]:
    """All distinct tokens ranked by total count descending, ties lexicographic."""
    counts: Counter[str] = Counter()
    for bag in bags:
        counts.update(bag.tokens)
    return sorted(counts, key=lambda tok: (-counts[tok], tok))


def build_activation_fingerprint(
    acc: ClassAccumulator, params: FuzzifyParams, use_magnitude: bool = False
) -> Fingerprint:
    """Rank the accumulated coordinates and fuzzify the top K."""
    if params.k > acc.sums.size:
        raise ParameterError(
            f"k={params.k} exceeds the activation dimension {acc.sums.size}"
        )
    ranked = rank_activations(acc.sums, use_magnitude)
    return fuzzify(ranked, params, FeatureSpace.ACTIVATION)


def build_token_fingerprint(
    examples: Sequence[LabeledTokenBag], params: FuzzifyParams
) -> Fingerprint:
    """Rank one class's tokens by frequency and fuzzify the top K."""
    examples = list(examples)
    if not examples:
        raise BuildError("cannot build a token fingerprint from zero examples")
    label = examples[0].label
    for bag in examples:
        if bag.label != label:
            raise BuildError(f"mixed labels: {label!r} vs {bag.label!r} (instance {bag.id!r})")
    ranked = rank_tokens(examples)
    if len(ranked) < params.k:
        raise BuildError(
            f"class {label!r} has {len(ranked)} distinct tokens, need k={params.k}"
        )
    return fuzzify(ranked, params, FeatureSpace.TOKEN)


@dataclass(frozen=True)
class FingerprintLibrary:
    """One fingerprint per class, all built with identical parameters."""

    fingerprints: Mapping[str, Fingerprint]
    params: FuzzifyParams
    dimension: int | None
    feature_space: FeatureSpace
    use_magnitude: bool = False

    def __post_init__(self):
        object.__setattr__(self, "fingerprints", dict(self.fingerprints))
        if not self.fingerprints:
            raise BuildError("a fingerprint library needs at least one class")
        for label, fp in self.fingerprints.items():
            if fp.k != self.params.k:
                raise FuzzyFPError(
                    f"class {label!r} fingerprint has k={fp.k}, library declares {self.params.k}"
                )
            if fp.feature_space != self.feature_space:
                raise FuzzyFPError(
                    f"class {label!r} fingerprint is {fp.feature_space.value}-space, "
                    f"library declares {self.feature_space.value}"
                )

    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(self.fingerprints))

    def __getitem__(self, label: str) -> Fingerprint:
        return self.fingerprints[label]

    def __len__(self) -> int:
        return len(self.fingerprints)


def class_rankings(
    data: ActivationDataset | TokenDataset, use_magnitude: bool = False
) -> dict[str, list[Element]]:
    """Full (un-truncated) per-class element rankings; one ranking per label.

    The top-K fingerprint for any K is a prefix of these, which is what lets
    a K-sweep rank once and truncate per K.
    """
    if len(data) == 0:
        raise BuildError("cannot build rankings from an empty dataset")
    rankings: dict[str, list[Element]] = {}
    if data.feature_space is FeatureSpace.ACTIVATION:
        by_label: dict[str, list[EmbeddingRecord]] = {}
        for rec in data.records:
            by_label.setdefault(rec.label, []).append(rec)
        for label, recs in by_label.items():
            acc = accumulate_class(recs)
            rankings[label] = list(rank_activations(acc.sums, use_magnitude))
    else:
        by_label_bags: dict[str, list[LabeledTokenBag]] = {}
        for bag in data.bags():
            by_label_bags.setdefault(bag.label, []).append(bag)
        for label, bags in by_label_bags.items():
            rankings[label] = list(rank_tokens(bags))
    return rankings


def library_from_rankings(
    rankings: Mapping[str, Sequence[Element]],
    params: FuzzifyParams,
    feature_space: FeatureSpace,
    dimension: int | None,
    use_magnitude: bool = False,
) -> FingerprintLibrary:
    """Fuzzify the K-prefix of each class ranking into a library."""
    fingerprints = {}
    for label in sorted(rankings):
        ranked = rankings[label]
        if feature_space is FeatureSpace.ACTIVATION and params.k > len(ranked):
            raise ParameterError(
                f"k={params.k} exceeds the activation dimension {len(ranked)}"
            )
        if feature_space is FeatureSpace.TOKEN and params.k > len(ranked):
            raise BuildError(
                f"class {label!r} has {len(ranked)} distinct tokens, need k={params.k}"
            )
        fingerprints[label] = fuzzify(ranked, params, feature_space)
    return FingerprintLibrary(
        fingerprints=fingerprints,
        params=params,
        dimension=dimension,
        feature_space=feature_space,
        use_magnitude=use_magnitude,
    )


def build_library(
    data: ActivationDataset | TokenDataset,
    params: FuzzifyParams,
    use_magnitude: bool = False,
) -> FingerprintLibrary:
    """Build one fingerprint per distinct label in `data`."""
    rankings = class_rankings(data, use_magnitude)
    return library_from_rankings(
        rankings, params, data.feature_space, data.dimension, use_magnitude
    )


def instance_fingerprint(
    vector: Sequence[float] | np.ndarray,
    params: FuzzifyParams,
    use_magnitude: bool = False,
) -> Fingerprint:
    """Fingerprint a single activation vector with the library's procedure."""
    arr = np.asarray(vector, dtype=np.float64)
    if params.k > arr.size:
        raise ParameterError(f"k={params.k} exceeds the vector dimension {arr.size}")
    return fuzzify(rank_activations(arr, use_magnitude), params, FeatureSpace.ACTIVATION)


def token_instance_fingerprint(bag: LabeledTokenBag, params: FuzzifyParams) -> Fingerprint:
    """Fingerprint a single token bag.

    Short texts can carry fewer than K distinct tokens; the instance
    fingerprint then shrinks to the tokens that exist.
    """
    ranked = rank_tokens([bag])
    k_eff = min(params.k, len(ranked))
    return fuzzify(ranked, FuzzifyParams(k=k_eff, a=params.a), FeatureSpace.TOKEN)
