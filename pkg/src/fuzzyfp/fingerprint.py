"""Fingerprint value types, the rank-based membership function and fuzzy similarity.

A fuzzy fingerprint is an ordered top-K list of feature elements, each carrying
a membership in [0, 1] that decreases with rank.  Two fingerprints are compared
with a fuzzy-AND (minimum) over their shared elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, FeatureSpaceError, FuzzyFPError, ParameterError

Element = Union[int, str]


class FeatureSpace(str, Enum):
    """Which universe the fingerprint elements index."""

    ACTIVATION = "activation"  # encoder output coordinates 0..D-1
    TOKEN = "token"            # token strings


@dataclass(frozen=True)
class FuzzifyParams:
    """Fingerprint size K and membership slope a."""

    k: int
    a: float = 0.8

    def __post_init__(self):
        if self.k < 1:
            raise ParameterError(f"fingerprint size k must be >= 1, got {self.k}")
        if not 0.0 <= self.a <= 1.0:
            raise ParameterError(f"slope a must lie in [0, 1], got {self.a}")


@dataclass(frozen=True)
class SimilarityParams:
    """Normalization constant N for the similarity sum."""

    n: float = 1.0

    def __post_init__(self):
        if not self.n > 0:
            raise ParameterError(f"normalization constant n must be > 0, got {self.n}")


@dataclass(frozen=True)
class Fingerprint:
    """Ordered (element, membership) pairs; memberships non-increasing, top one 1.0."""

    entries: tuple[tuple[Element, float], ...]
    k: int
    feature_space: FeatureSpace

    def __post_init__(self):
        if len(self.entries) != self.k:
            raise FuzzyFPError(
                f"fingerprint declares k={self.k} but holds {len(self.entries)} entries"
            )
        elements = [e for e, _ in self.entries]
        if len(set(elements)) != len(elements):
            raise FuzzyFPError("fingerprint elements must be pairwise distinct")
        mus = [mu for _, mu in self.entries]
        for mu in mus:
            if not 0.0 <= mu <= 1.0:
                raise FuzzyFPError(f"membership {mu} outside [0, 1]")
        if any(a < b for a, b in zip(mus, mus[1:])):
            raise FuzzyFPError("memberships must be non-increasing along the rank order")
        if mus and mus[0] != 1.0:
            raise FuzzyFPError(f"top-ranked membership must be 1.0, got {mus[0]}")

    @property
    def elements(self) -> tuple[Element, ...]:
        return tuple(e for e, _ in self.entries)

    def membership(self, element: Element) -> float:
        """Membership of `element`, 0.0 when it is not in the fingerprint."""
        for e, mu in self.entries:
            if e == element:
                return mu
        return 0.0


def fuzzify(
    ranked: Sequence[Element],
    params: FuzzifyParams,
    feature_space: FeatureSpace = FeatureSpace.ACTIVATION,
) -> Fingerprint:
    """Turn a ranked element list into a fingerprint of its first K elements.

    The i-th kept element (i = 0..K-1) receives membership 1 - a*i/K, so the
    top element always has membership 1 and the tail approaches 1 - a.
    """
    k, a = params.k, params.a
    if len(ranked) < k:
        raise DimensionError(f"need at least k={k} ranked elements, got {len(ranked)}")
    top = tuple(ranked[:k])
    if len(set(top)) != k:
        raise DimensionError(f"ranked list holds fewer than k={k} distinct elements")
    # evaluated as (K - a*i)/K rather than 1 - a*i/K: keeps round decimal
    # ladders (e.g. K=10, a=1 -> 1.0, 0.9, ..., 0.1) exact in binary floats
    entries = tuple((e, (k - a * i) / k) for i, e in enumerate(top))
    return Fingerprint(entries=entries, k=k, feature_space=feature_space)


def similarity(fa: Fingerprint, fb: Fingerprint, params: SimilarityParams) -> float:
    """Fuzzy-AND similarity: sum of min memberships over shared elements, / N.

    Elements absent from a fingerprint contribute membership 0, so only the
    intersection matters.  The sum is exactly rounded (math.fsum), which makes
    the result bit-for-bit symmetric in (fa, fb) and order-independent.
    """
    if fa.feature_space != fb.feature_space:
        raise FeatureSpaceError(
            f"cannot compare {fa.feature_space.value} vs {fb.feature_space.value} fingerprints"
        )
    mu_a = dict(fa.entries)
    mu_b = dict(fb.entries)
    total = math.fsum(
        min(mu, mu_b[element]) for element, mu in mu_a.items() if element in mu_b
    )
    return total / params.n


def rank_by_value(values: Sequence[float]) -> list[int]:
    """Indices 0..D-1 sorted by value descending, ties by index ascending."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError("rank_by_value needs a non-empty 1-d vector")
    order = np.argsort(-arr, kind="stable")
    return [int(i) for i in order]
