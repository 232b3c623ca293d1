import numpy as np
import pytest

from fuzzyfp import (
    ActivationDataset,
    BuildError,
    DimensionError,
    EmbeddingRecord,
    FeatureSpace,
    FingerprintLibrary,
    FuzzifyParams,
    FuzzyFPError,
    LabeledTokenBag,
    ParameterError,
    TokenDataset,
    TokenRecord,
    accumulate_class,
    build_activation_fingerprint,
    build_library,
    build_token_fingerprint,
    fuzzify,
    instance_fingerprint,
    token_instance_fingerprint,
)


def rec(i, label, vector, split="train"):
    return EmbeddingRecord(id=f"{label}-{i}", split=split, label=label, vector=np.array(vector, float))


def bag(i, label, text):
    return TokenRecord(id=f"{label}-{i}", split="train", label=label, text=text).bag()


class TestAccumulate:
    def test_single_example_is_identity(self):
        acc = accumulate_class([rec(0, "x", [0.2, -0.1, 0.9])])
        assert acc.sums.tolist() == [0.2, -0.1, 0.9]
        assert acc.count == 1
        assert acc.label == "x"

    def test_two_examples_sum(self):
        acc = accumulate_class([rec(0, "x", [1, 0, 0]), rec(1, "x", [0.5, 2, 0])])
        assert acc.sums.tolist() == [1.5, 2.0, 0.0]
        assert acc.count == 2

    def test_empty_input(self):
        with pytest.raises(BuildError):
            accumulate_class([])

    def test_mixed_labels(self):
        with pytest.raises(BuildError):
            accumulate_class([rec(0, "x", [1.0]), rec(0, "y", [2.0])])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            accumulate_class([rec(0, "x", [1.0, 2.0]), rec(1, "x", [1.0])])


class TestActivationFingerprint:
    def test_rank_then_fuzzify(self):
        acc = accumulate_class([rec(0, "x", [0.2, -0.1, 0.9])])
        fp = build_activation_fingerprint(acc, FuzzifyParams(k=2, a=1.0))
        assert fp.entries == ((2, 1.0), (0, 0.5))
        assert fp.feature_space is FeatureSpace.ACTIVATION

    def test_accumulated_then_ranked(self):
        acc = accumulate_class([rec(0, "x", [1, 0, 0]), rec(1, "x", [0.5, 2, 0])])
        fp = build_activation_fingerprint(acc, FuzzifyParams(k=3, a=1.0))
        assert fp.elements == (1, 0, 2)
        mus = [mu for _, mu in fp.entries]
        assert mus == pytest.approx([1.0, 2 / 3, 1 / 3])

    def test_tie_break_by_index(self):
        acc = accumulate_class([rec(0, "x", [5.0, 5.0, 5.0])])
        fp = build_activation_fingerprint(acc, FuzzifyParams(k=2, a=0.8))
        assert fp.entries == ((0, 1.0), (1, 0.6))

    def test_k_above_dimension(self):
        acc = accumulate_class([rec(0, "x", [1.0, 2.0])])
        with pytest.raises(ParameterError):
            build_activation_fingerprint(acc, FuzzifyParams(k=3, a=1.0))

    def test_magnitude_switch(self):
        acc = accumulate_class([rec(0, "x", [-10.0, 3.0, 1.0])])
        signed = build_activation_fingerprint(acc, FuzzifyParams(k=1, a=1.0))
        absolute = build_activation_fingerprint(acc, FuzzifyParams(k=1, a=1.0), use_magnitude=True)
        assert signed.elements == (1,)
        assert absolute.elements == (0,)


class TestTokenFingerprint:
    def test_counts_and_lexicographic_ties(self):
        fp = build_token_fingerprint(
            [bag(0, "x", "a a b"), bag(1, "x", "a c")], FuzzifyParams(k=2, a=1.0)
        )
        assert fp.entries == (("a", 1.0), ("b", 0.5))

    def test_single_token_text(self):
        fp = build_token_fingerprint([bag(0, "x", "x")], FuzzifyParams(k=1, a=1.0))
        assert fp.entries == (("x", 1.0),)

    def test_not_enough_distinct_tokens(self):
        with pytest.raises(BuildError):
            build_token_fingerprint([bag(0, "x", "a")], FuzzifyParams(k=2, a=1.0))

    def test_mixed_labels(self):
        with pytest.raises(BuildError):
            build_token_fingerprint([bag(0, "x", "a"), bag(0, "y", "b")], FuzzifyParams(k=1, a=1.0))

    def test_empty_bag_rejected(self):
        with pytest.raises(BuildError):
            LabeledTokenBag(id="i", label="x", tokens=())


class TestBuildLibrary:
    def test_keys_equal_label_set(self):
        records = [rec(i, label, np.eye(4)[i % 4]) for i, label in enumerate(["A", "B", "A", "B", "A", "B"])]
        lib = build_library(ActivationDataset(records=tuple(records), dimension=4), FuzzifyParams(k=2, a=0.8))
        assert lib.labels() == ("A", "B")

    def test_seven_class_shape(self):
        rng = np.random.default_rng(3)
        records = []
        for c in range(7):
            for i in range(3):
                records.append(rec(f"{c}-{i}", f"label{c}", rng.normal(size=16)))
        lib = build_library(ActivationDataset(records=tuple(records), dimension=16), FuzzifyParams(k=10, a=1.0))
        assert len(lib) == 7
        for label in lib.labels():
            assert len(lib[label].entries) == 10

    def test_single_class_library_is_valid(self):
        lib = build_library(
            ActivationDataset(records=(rec(0, "only", [1.0, 0.0]),), dimension=2),
            FuzzifyParams(k=1, a=0.8),
        )
        assert lib.labels() == ("only",)

    def test_empty_dataset(self):
        with pytest.raises(BuildError):
            build_library(TokenDataset(records=()), FuzzifyParams(k=1, a=0.8))

    def test_token_library(self):
        records = (
            TokenRecord(id="1", split="train", label="A", text="cats purr"),
            TokenRecord(id="2", split="train", label="B", text="dogs bark"),
        )
        lib = build_library(TokenDataset(records=records), FuzzifyParams(k=2, a=0.8))
        assert lib.feature_space is FeatureSpace.TOKEN
        assert lib.dimension is None

    def test_library_rejects_mismatched_k(self):
        p = FuzzifyParams(k=2, a=1.0)
        good = fuzzify([1, 2], p)
        wrong = fuzzify([1, 2, 3], FuzzifyParams(k=3, a=1.0))
        with pytest.raises(FuzzyFPError):
            FingerprintLibrary(
                fingerprints={"a": good, "b": wrong},
                params=p,
                dimension=4,
                feature_space=FeatureSpace.ACTIVATION,
            )

    def test_library_needs_a_class(self):
        with pytest.raises(BuildError):
            FingerprintLibrary(
                fingerprints={},
                params=FuzzifyParams(k=1, a=1.0),
                dimension=4,
                feature_space=FeatureSpace.ACTIVATION,
            )


class TestInstanceFingerprint:
    def test_dominant_coordinate(self):
        fp = instance_fingerprint([0.0, 0.1, 9.0, 0.2], FuzzifyParams(k=1, a=0.8))
        assert fp.elements == (2,)

    def test_matches_single_example_class(self):
        vector = [0.3, -2.0, 1.5, 0.7]
        params = FuzzifyParams(k=3, a=0.8)
        acc = accumulate_class([rec(0, "x", vector)])
        assert instance_fingerprint(vector, params) == build_activation_fingerprint(acc, params)

    def test_ladder_is_value_independent(self):
        rng = np.random.default_rng(11)
        fp = instance_fingerprint(rng.normal(size=64), FuzzifyParams(k=10, a=1.0))
        assert [mu for _, mu in fp.entries] == [1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1]

    def test_k_above_dimension(self):
        with pytest.raises(ParameterError):
            instance_fingerprint([1.0, 2.0], FuzzifyParams(k=3, a=0.8))

    def test_token_instance_shrinks_to_available_tokens(self):
        fp = token_instance_fingerprint(bag(0, "x", "only two"), FuzzifyParams(k=10, a=0.8))
        assert fp.k == 2
        assert set(fp.elements) == {"only", "two"}
