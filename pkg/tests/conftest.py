"""Shared fixtures: a frozen 7-emotion reference library (K=10, a=1) and
three frozen sample instance fingerprints with known winners.

The element-id lists are golden data; every expected score derived from them
was computed with an independent brute-force overlap oracle and frozen here.
"""

import pytest

from fuzzyfp import FeatureSpace, FuzzifyParams, FingerprintLibrary, fuzzify

# per-class ranked element ids, top rank first
REFERENCE_LIBRARY_IDS = {
    "neutral": [217, 644, 541, 718, 401, 330, 426, 78, 580, 114],
    "anger": [8, 679, 204, 292, 651, 573, 111, 624, 184, 309],
    "disgust": [588, 573, 27, 154, 331, 67, 561, 5, 503, 446],
    "fear": [588, 313, 655, 406, 736, 349, 624, 371, 292, 8],
    "happiness": [588, 585, 388, 600, 767, 319, 741, 561, 473, 139],
    "sadness": [371, 588, 5, 156, 4, 93, 550, 402, 519, 422],
    "surprise": [691, 588, 97, 573, 530, 535, 654, 384, 366, 613],
}

SAMPLE_IDS = {
    "sample1": [5, 371, 156, 550, 93, 4, 232, 424, 402, 442],
    "sample2": [8, 679, 309, 624, 292, 76, 134, 204, 560, 459],
    "sample3": [330, 644, 541, 217, 114, 426, 211, 718, 401, 553],
}

# winner plus every non-zero class score, from the brute-force oracle
SAMPLE_EXPECTED = {
    "sample1": ("sadness", {"disgust": 0.3, "fear": 0.3, "sadness": 4.0}),
    "sample2": ("anger", {"anger": 3.2, "fear": 0.7}),
    "sample3": ("neutral", {"neutral": 3.9}),
}

REFERENCE_PARAMS = FuzzifyParams(k=10, a=1.0)
REFERENCE_DIMENSION = 768


@pytest.fixture(scope="session")
def reference_library() -> FingerprintLibrary:
    fingerprints = {
        label: fuzzify(ids, REFERENCE_PARAMS, FeatureSpace.ACTIVATION)
        for label, ids in REFERENCE_LIBRARY_IDS.items()
    }
    return FingerprintLibrary(
        fingerprints=fingerprints,
        params=REFERENCE_PARAMS,
        dimension=REFERENCE_DIMENSION,
        feature_space=FeatureSpace.ACTIVATION,
    )


@pytest.fixture(scope="session")
def sample_fingerprints():
    return {
        name: fuzzify(ids, REFERENCE_PARAMS, FeatureSpace.ACTIVATION)
        for name, ids in SAMPLE_IDS.items()
    }
