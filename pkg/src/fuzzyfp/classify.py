"""Classification against a fingerprint library, with per-element explanations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .build import FingerprintLibrary, instance_fingerprint, token_instance_fingerprint
from .data import EmbeddingRecord, TokenRecord
from .errors import ClassificationError, DimensionError, FeatureSpaceError
from .fingerprint import Element, FeatureSpace, Fingerprint, SimilarityParams, similarity


@dataclass(frozen=True)
class ClassificationResult:
    predicted: str
    scores: dict[str, float]
    instance_fp: Fingerprint


class ExplanationRow(NamedTuple):
    element: Element
    mu_instance: float
    mu_class: float
    contribution: float  # min of the two memberships, before dividing by N


@dataclass(frozen=True)
class Explanation:
    """Shared-element evidence behind each class score.

    `totals[label]` equals the classification score for that class;
    `no_evidence` marks instances that share nothing with any class.
    """

    per_class: dict[str, tuple[ExplanationRow, ...]]
    totals: dict[str, float]
    no_evidence: bool


def classify(
    instance_fp: Fingerprint,
    library: FingerprintLibrary,
    params: SimilarityParams = SimilarityParams(),
) -> ClassificationResult:
    """Score the instance against every class; argmax wins, ties to the smallest label."""
    if not library.fingerprints:
        raise ClassificationError("cannot classify against an empty library")
    if instance_fp.feature_space != library.feature_space:
        raise FeatureSpaceError(
            f"instance is {instance_fp.feature_space.value}-space, "
            f"library is {library.feature_space.value}-space"
        )
    scores = {
        label: similarity(instance_fp, fp, params)
        for label, fp in library.fingerprints.items()
    }
    predicted = min(scores, key=lambda label: (-scores[label], label))
    return ClassificationResult(predicted=predicted, scores=scores, instance_fp=instance_fp)


def explain(
    instance_fp: Fingerprint,
    library: FingerprintLibrary,
    params: SimilarityParams = SimilarityParams(),
) -> Explanation:
    """List, per class, the shared elements with both memberships and their min."""
    result = classify(instance_fp, library, params)
    per_class: dict[str, tuple[ExplanationRow, ...]] = {}
    for label, fp in library.fingerprints.items():
        class_mu = dict(fp.entries)
        rows = []
        for element, mu_i in instance_fp.entries:  # instance rank order
            if element in class_mu:
                mu_c = class_mu[element]
                rows.append(ExplanationRow(element, mu_i, mu_c, min(mu_i, mu_c)))
        rows.sort(key=lambda row: -row.contribution)  # stable: ties keep instance rank
        per_class[label] = tuple(rows)
    totals = dict(result.scores)
    no_evidence = all(total == 0.0 for total in totals.values())
    return Explanation(per_class=per_class, totals=totals, no_evidence=no_evidence)


def fingerprint_record(
    record: EmbeddingRecord | TokenRecord, library: FingerprintLibrary
) -> Fingerprint:
    """Fingerprint a dataset record with the library's own parameters."""
    if isinstance(record, EmbeddingRecord):
        if library.feature_space is not FeatureSpace.ACTIVATION:
            raise FeatureSpaceError(
                f"record {record.id!r} is a vector but the library is token-space"
            )
        if library.dimension is not None and record.vector.size != library.dimension:
            raise DimensionError(
                f"record {record.id!r} has dimension {record.vector.size}, "
                f"library expects {library.dimension}"
            )
        return instance_fingerprint(record.vector, library.params, library.use_magnitude)
    if library.feature_space is not FeatureSpace.TOKEN:
        raise FeatureSpaceError(
            f"record {record.id!r} is text but the library is activation-space"
        )
    return token_instance_fingerprint(record.bag(), library.params)


def classify_record(
    record: EmbeddingRecord | TokenRecord,
    library: FingerprintLibrary,
    params: SimilarityParams = SimilarityParams(),
) -> ClassificationResult:
    return classify(fingerprint_record(record, library), library, params)


def classify_vector(
    vector: np.ndarray,
    library: FingerprintLibrary,
    params: SimilarityParams = SimilarityParams(),
) -> ClassificationResult:
    """Classify a bare activation vector (dimension-checked against the library)."""
    arr = np.asarray(vector, dtype=np.float64)
    if library.dimension is not None and arr.size != library.dimension:
        raise DimensionError(
            f"vector has dimension {arr.size}, library expects {library.dimension}"
        )
    fp = instance_fingerprint(arr, library.params, library.use_magnitude)
    return classify(fp, library, params)
