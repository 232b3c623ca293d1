"""Confusion matrices, per-class/macro F1, and fingerprint-size sweeps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .build import (
    FingerprintLibrary,
    class_rankings,
    library_from_rankings,
    rank_activations,
    rank_tokens,
)
from .classify import classify, fingerprint_record
from .data import ActivationDataset, TokenDataset
from .errors import EvaluationError, ParameterError
from .fingerprint import FeatureSpace, FuzzifyParams, SimilarityParams, fuzzify


@dataclass(frozen=True)
class ConfusionMatrix:
    """Rows are gold labels, columns predicted, in `labels` order."""

    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)


@dataclass(frozen=True)
class EvalReport:
    per_class_f1: dict[str, float]
    macro_f1: float
    confusion: ConfusionMatrix
    k: int | None = None
    a: float | None = None
    n: float | None = None


@dataclass(frozen=True)
class KSweepReport:
    """Macro-F1 as a function of fingerprint size, points sorted by K."""

    points: tuple[tuple[int, float], ...]
    best_k: int


def confusion_matrix(
    gold: Sequence[str], predicted: Sequence[str], labels: Sequence[str]
) -> ConfusionMatrix:
    index = {label: i for i, label in enumerate(labels)}
    counts = [[0] * len(labels) for _ in labels]
    for g, p in zip(gold, predicted):
        counts[index[g]][index[p]] += 1
    return ConfusionMatrix(
        labels=tuple(labels), counts=tuple(tuple(row) for row in counts)
    )


def macro_f1(
    gold: Sequence[str],
    predicted: Sequence[str],
    label_set: Sequence[str],
    k: int | None = None,
    a: float | None = None,
    n: float | None = None,
) -> EvalReport:
    """Per-class F1 (0/0 -> 0) and their unweighted mean over `label_set`."""
    if len(gold) != len(predicted):
        raise EvaluationError(
            f"gold has {len(gold)} labels, predictions have {len(predicted)}"
        )
    labels = tuple(label_set)
    known = set(labels)
    for i, (g, p) in enumerate(zip(gold, predicted)):
        if g not in known:
            raise EvaluationError(f"gold label {g!r} at position {i} is outside the label set")
        if p not in known:
            raise EvaluationError(
                f"predicted label {p!r} at position {i} is outside the label set"
            )
    confusion = confusion_matrix(gold, predicted, labels)
    per_class: dict[str, float] = {}
    for i, label in enumerate(labels):
        tp = confusion.counts[i][i]
        fn = sum(confusion.counts[i]) - tp
        fp = sum(row[i] for row in confusion.counts) - tp
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        per_class[label] = (
            2.0 * precision * recall / (precision + recall) if precision + recall else 0.0
        )
    macro = sum(per_class.values()) / len(labels)
    return EvalReport(
        per_class_f1=per_class, macro_f1=macro, confusion=confusion, k=k, a=a, n=n
    )


def evaluate(
    library: FingerprintLibrary,
    test: ActivationDataset | TokenDataset,
    params: SimilarityParams = SimilarityParams(),
) -> EvalReport:
    """Classify every record of `test` and report F1 over the library's labels."""
    if len(test) == 0:
        raise EvaluationError("cannot evaluate on an empty dataset")
    labels = library.labels()
    known = set(labels)
    gold, predicted = [], []
    for record in test.records:
        if record.label not in known:
            raise EvaluationError(
                f"record {record.id!r} carries label {record.label!r}, "
                f"which the library does not know"
            )
        result = classify(fingerprint_record(record, library), library, params)
        gold.append(record.label)
        predicted.append(result.predicted)
    return macro_f1(
        gold, predicted, labels, k=library.params.k, a=library.params.a, n=params.n
    )


def _instance_rankings(data, use_magnitude):
    if data.feature_space is FeatureSpace.ACTIVATION:
        return [rank_activations(rec.vector, use_magnitude) for rec in data.records]
    return [rank_tokens([bag]) for bag in data.bags()]


def sweep_k(
    train: ActivationDataset | TokenDataset,
    eval_split: ActivationDataset | TokenDataset,
    k_values: Sequence[int],
    a: float,
    params: SimilarityParams = SimilarityParams(),
    use_magnitude: bool = False,
) -> KSweepReport:
    """Evaluate one library per K.

    Rankings are computed once per class/instance and prefix-truncated per K,
    which is exactly what rebuilding from scratch would produce.
    """
    if not k_values:
        raise ParameterError("k_values must not be empty")
    if train.feature_space != eval_split.feature_space:
        raise EvaluationError("train and eval splits live in different feature spaces")
    overlap = {r.id for r in train.records} & {r.id for r in eval_split.records}
    if overlap:
        raise EvaluationError(
            f"train and eval splits share instance ids, e.g. {sorted(overlap)[0]!r}"
        )
    ks = sorted(set(int(k) for k in k_values))
    rankings = class_rankings(train, use_magnitude)
    inst_rankings = _instance_rankings(eval_split, use_magnitude)
    space = train.feature_space
    points = []
    for k in ks:
        lib = library_from_rankings(
            rankings, FuzzifyParams(k=k, a=a), space, train.dimension, use_magnitude
        )
        gold, predicted = [], []
        for record, ranked in zip(eval_split.records, inst_rankings):
            if record.label not in rankings:
                raise EvaluationError(
                    f"record {record.id!r} carries label {record.label!r}, "
                    f"which the training split does not contain"
                )
            k_inst = k if space is FeatureSpace.ACTIVATION else min(k, len(ranked))
            fp = fuzzify(ranked, FuzzifyParams(k=k_inst, a=a), space)
            gold.append(record.label)
            predicted.append(classify(fp, lib, params).predicted)
        report = macro_f1(gold, predicted, lib.labels(), k=k, a=a, n=params.n)
        points.append((k, report.macro_f1))
    best_k = min(points, key=lambda point: (-point[1], point[0]))[0]
    return KSweepReport(points=tuple(points), best_k=best_k)


def select_k(report: KSweepReport) -> int:
    """The K with maximal macro-F1; ties go to the smaller (cheaper) K."""
    if not report.points:
        raise EvaluationError("cannot select K from an empty sweep")
    return min(report.points, key=lambda point: (-point[1], point[0]))[0]


@dataclass(frozen=True)
class AveragedReport:
    """Mean of several single-run reports (e.g. one per embedding set)."""

    per_class_f1: dict[str, float]
    macro_f1: float
    runs: int


def average_reports(reports: Sequence[EvalReport]) -> AveragedReport:
    if not reports:
        raise EvaluationError("cannot average zero reports")
    labels = set(reports[0].per_class_f1)
    for rep in reports[1:]:
        if set(rep.per_class_f1) != labels:
            raise EvaluationError("reports to average must share one label set")
    per_class = {
        label: sum(rep.per_class_f1[label] for rep in reports) / len(reports)
        for label in sorted(labels)
    }
    macro = sum(rep.macro_f1 for rep in reports) / len(reports)
    return AveragedReport(per_class_f1=per_class, macro_f1=macro, runs=len(reports))
